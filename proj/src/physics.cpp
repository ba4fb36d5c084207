#include "pitwave/physics.hpp"

#include <stdexcept>

namespace pitwave {

namespace {

std::span<double> block(Eigen::VectorXd& v, int k, std::size_t n) { return {v.data() + k * n, n}; }
std::span<const double> block(const Eigen::VectorXd& v, int k, std::size_t n) {
  return {v.data() + k * n, n};
}

} // namespace

void ModelSpec::validate() const {
  if (kind == ModelKind::acoustic_advection && !(sound_speed > 0.0)) {
    throw std::invalid_argument("sound speed must be positive for the acoustic-advection model");
  }
  if (nu < 0.0) {
    throw std::invalid_argument("damping strength nu must be non-negative");
  }
  if (nu > 0.0 && !(tau > 0.0)) {
    throw std::invalid_argument("damping time scale must be positive when nu > 0");
  }
}

StateKind state_kind(ModelKind kind) {
  return kind == ModelKind::advection ? StateKind::scalar : StateKind::acoustic;
}

std::pair<double, double> damping_coefficients(double nu, double dx, double dy, double tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("damping time scale must be positive");
  }
  return {nu * dx * dx / tau, nu * dy * dy / tau};
}

ModelOperator::ModelOperator(const Grid2D& grid, const ModelSpec& spec)
    : spec_(spec), advection_(grid, spec.velocity, spec.advective_order) {
  spec_.validate();
  if (spec_.kind == ModelKind::acoustic_advection && spec_.nu > 0.0) {
    std::tie(alpha1_, alpha2_) = damping_coefficients(spec_.nu, grid.dx(), grid.dy(), spec_.tau);
  }
}

void ModelOperator::advective_tendency(const Eigen::VectorXd& q, Eigen::VectorXd& out) const {
  const auto n = static_cast<std::size_t>(grid().cells());
  out.resize(q.size());
  for (int k = 0; k < field_count(state_kind()); ++k) {
    advection_.apply(block(q, k, n), block(out, k, n), false);
  }
}

void ModelOperator::fast_momentum(const Eigen::VectorXd& q, Eigen::VectorXd& out) const {
  const auto n = static_cast<std::size_t>(grid().cells());
  const Grid2D& g = grid();
  const double c = spec_.sound_speed;
  auto u = block(q, 0, n);
  auto v = block(q, 1, n);
  auto p = block(q, 2, n);
  auto du = block(out, 0, n);
  auto dv = block(out, 1, n);
  centered_derivative_into(p, Axis::x, g, -c, du, false);
  centered_derivative_into(p, Axis::y, g, -c, dv, false);
  if (alpha1_ > 0.0 || alpha2_ > 0.0) {
    thread_local std::vector<double> div;
    div.resize(n);
    centered_derivative_into(u, Axis::x, g, 1.0, div, false);
    centered_derivative_into(v, Axis::y, g, 1.0, div, true);
    centered_derivative_into(div, Axis::x, g, alpha1_, du, true);
    centered_derivative_into(div, Axis::y, g, alpha2_, dv, true);
  }
}

void ModelOperator::fast_pressure(const Eigen::VectorXd& q, Eigen::VectorXd& out) const {
  const auto n = static_cast<std::size_t>(grid().cells());
  const double c = spec_.sound_speed;
  auto dp = block(out, 2, n);
  centered_derivative_into(block(q, 0, n), Axis::x, grid(), -c, dp, false);
  centered_derivative_into(block(q, 1, n), Axis::y, grid(), -c, dp, true);
}

void ModelOperator::rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const {
  if (q.size() != dimension()) {
    throw std::invalid_argument("state dimension does not match model operator");
  }
  if (state_kind() == StateKind::scalar) {
    advective_tendency(q, out);
    return;
  }
  out.resize(q.size());
  thread_local Eigen::VectorXd slow;
  advective_tendency(q, slow);
  fast_momentum(q, out);
  fast_pressure(q, out);
  out += slow;
}

State advection_rhs(const State& state, const ModelSpec& spec, const Grid2D& grid) {
  if (spec.kind != ModelKind::advection || state.kind() != StateKind::scalar) {
    throw std::invalid_argument("advection_rhs needs a scalar state and an advection model");
  }
  ModelOperator op(grid, spec);
  Eigen::VectorXd out;
  op.rhs(state.values(), out);
  return State(StateKind::scalar, grid, std::move(out));
}

State acoustic_advection_rhs(const State& state, const ModelSpec& spec, const Grid2D& grid) {
  if (spec.kind != ModelKind::acoustic_advection || state.kind() != StateKind::acoustic) {
    throw std::invalid_argument(
        "acoustic_advection_rhs needs an acoustic state and an acoustic-advection model");
  }
  ModelOperator op(grid, spec);
  Eigen::VectorXd out;
  op.rhs(state.values(), out);
  return State(StateKind::acoustic, grid, std::move(out));
}

} // namespace pitwave
