#include "pitwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pitwave {

Grid2D::Grid2D(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < min_cells || ny < min_cells) {
    throw std::invalid_argument("grid too small: need at least " + std::to_string(min_cells) +
                                " cells per direction, got " + std::to_string(nx) + "x" +
                                std::to_string(ny));
  }
  if (!(lx > 0.0) || !(ly > 0.0)) {
    throw std::invalid_argument("domain lengths must be positive");
  }
}

std::pair<int, int> Grid2D::nearest_cell(double x, double y) const {
  const int i = std::clamp(static_cast<int>(std::floor(x / dx())), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(y / dy())), 0, ny_ - 1);
  return {i, j};
}

Grid2D build_grid(int nx, int ny, double lx, double ly) { return Grid2D(nx, ny, lx, ly); }

int state_dimension(StateKind kind, const Grid2D& grid) {
  return field_count(kind) * grid.cells();
}

State::State(StateKind kind, const Grid2D& grid)
    : kind_(kind), nx_(grid.nx()), ny_(grid.ny()),
      values_(Eigen::VectorXd::Zero(state_dimension(kind, grid))) {}

State::State(StateKind kind, const Grid2D& grid, Eigen::VectorXd values)
    : kind_(kind), nx_(grid.nx()), ny_(grid.ny()), values_(std::move(values)) {
  if (values_.size() != state_dimension(kind, grid)) {
    throw std::invalid_argument("state dimension mismatch: expected " +
                                std::to_string(state_dimension(kind, grid)) + ", got " +
                                std::to_string(values_.size()));
  }
}

std::span<double> State::field(int k) {
  const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
  return {values_.data() + k * n, n};
}

std::span<const double> State::field(int k) const {
  const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
  return {values_.data() + k * n, n};
}

bool State::all_finite() const { return values_.allFinite(); }

Eigen::VectorXd flatten(const State& state) { return state.values(); }

State unflatten(StateKind kind, const Grid2D& grid, const Eigen::VectorXd& values) {
  return State(kind, grid, values);
}

std::pair<double, double> velocity_at(const AdvectingVelocity& vel, double x, double y) {
  if (const auto* c = std::get_if<ConstantVelocity>(&vel)) {
    return {c->u, c->v};
  }
  const auto& r = std::get<SolidBodyRotation>(vel);
  return {r.rate * (y - r.yc), -r.rate * (x - r.xc)};
}

double velocity_at_interface(const AdvectingVelocity& vel, const Face& face, const Grid2D& grid) {
  if (face.axis == Axis::x) {
    const double x = (face.i + 1) * grid.dx();
    const double y = grid.y_center(face.j);
    return velocity_at(vel, x, y).first;
  }
  const double x = grid.x_center(face.i);
  const double y = (face.j + 1) * grid.dy();
  return velocity_at(vel, x, y).second;
}

double max_velocity_component(const AdvectingVelocity& vel, const Grid2D& grid) {
  if (const auto* c = std::get_if<ConstantVelocity>(&vel)) {
    return std::max(std::abs(c->u), std::abs(c->v));
  }
  const auto& r = std::get<SolidBodyRotation>(vel);
  const double reach_y = std::max(std::abs(r.yc), std::abs(grid.ly() - r.yc));
  const double reach_x = std::max(std::abs(r.xc), std::abs(grid.lx() - r.xc));
  return std::abs(r.rate) * std::max(reach_x, reach_y);
}

Eigen::VectorXd init_cosine_bump(const Grid2D& grid, double x0, double y0) {
  Eigen::VectorXd q(grid.cells());
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const double ddx = grid.x_center(i) - x0;
      const double ddy = grid.y_center(j) - y0;
      const double r = std::min(1.0, 4.0 * std::sqrt(ddx * ddx / 0.25 + ddy * ddy / 0.25));
      q[grid.index(i, j)] = 0.5 * (std::cos(std::numbers::pi * r) + 1.0);
    }
  }
  return q;
}

} // namespace pitwave
