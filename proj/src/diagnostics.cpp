#include "pitwave/diagnostics.hpp"

#include "pitwave/stencils.hpp"

#include <stdexcept>
#include <string>

namespace pitwave {

Eigen::VectorXd vorticity(std::span<const double> u, std::span<const double> v, const Grid2D& grid) {
  const auto n = static_cast<std::size_t>(grid.cells());
  if (u.size() != n || v.size() != n) {
    throw std::invalid_argument("velocity fields do not match the grid");
  }
  Eigen::VectorXd omega(grid.cells());
  std::span<double> out{omega.data(), n};
  centered_derivative_into(u, Axis::y, grid, 1.0, out, false);
  centered_derivative_into(v, Axis::x, grid, -1.0, out, true);
  return omega;
}

double total_energy(const State& state, const Grid2D& grid) {
  return state.values().squaredNorm() * grid.dx() * grid.dy();
}

double relative_l2_error(const Eigen::VectorXd& q_par, const Eigen::VectorXd& q_seq) {
  if (q_par.size() != q_seq.size()) {
    throw std::invalid_argument("states differ in dimension");
  }
  const double ref = q_seq.norm();
  if (ref == 0.0) {
    throw std::invalid_argument("reference state has zero norm");
  }
  return (q_par - q_seq).norm() / ref;
}

double max_norm(const Eigen::VectorXd& q) {
  return q.size() == 0 ? 0.0 : q.lpNorm<Eigen::Infinity>();
}

double sample_probe(const State& state, const Grid2D& grid, double x, double y, int variable) {
  if (variable < 0 || variable >= field_count(state.kind())) {
    throw std::invalid_argument("probe variable out of range");
  }
  if (x < 0.0 || x > grid.lx() || y < 0.0 || y > grid.ly()) {
    throw std::invalid_argument("probe location outside the domain");
  }
  const auto [i, j] = grid.nearest_cell(x, y);
  return state.field(variable)[grid.index(i, j)];
}

int variable_index(StateKind kind, std::string_view name) {
  if (kind == StateKind::scalar) {
    if (name == "q") return 0;
  } else {
    if (name == "u") return 0;
    if (name == "v") return 1;
    if (name == "pi") return 2;
  }
  throw std::invalid_argument("unknown variable '" + std::string(name) + "' for this state");
}

void ProbeSeries::record(double t, double value) {
  if (!times.empty() && !(t > times.back())) {
    throw std::invalid_argument("probe sample times must be strictly increasing");
  }
  times.push_back(t);
  values.push_back(value);
}

} // namespace pitwave
