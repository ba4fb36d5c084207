#include "pitwave/perfmodel.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace pitwave {

void SpeedupInputs::validate() const {
  if (n_processors < 1 || n_coarse < 1 || n_fine < 1) {
    throw std::invalid_argument("processor, coarse and fine step counts must be positive");
  }
  if (n_iterations < 0) {
    throw std::invalid_argument("iteration count must be non-negative");
  }
  if (!(tau_coarse > 0.0) || !(tau_fine > 0.0)) {
    throw std::invalid_argument("coarse and fine step costs must be positive");
  }
  if (tau_qr < 0.0) {
    throw std::invalid_argument("subspace update cost must be non-negative");
  }
}

double speedup_estimate(const SpeedupInputs& in) {
  in.validate();
  const double nt = static_cast<double>(in.n_total());
  const double nc_tc = in.n_coarse * in.tau_coarse;
  const double denom = nc_tc + in.n_iterations * (nc_tc + nt / in.n_processors * in.tau_fine) +
                       in.n_iterations * in.tau_qr;
  return nt * in.tau_fine / denom;
}

double SpeedupBounds::tightest() const { return std::min({iterations, coarse, subspace_update}); }

SpeedupBounds speedup_bounds(const SpeedupInputs& in) {
  in.validate();
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double it = in.n_iterations;
  SpeedupBounds b{};
  b.iterations = in.n_iterations == 0 ? inf : in.n_processors / it;
  b.coarse = in.n_fine * in.tau_fine / ((1.0 + it) * in.tau_coarse);
  const double qr = it * in.tau_qr;
  b.subspace_update = qr == 0.0 ? inf : static_cast<double>(in.n_total()) * in.tau_fine / qr;
  return b;
}

double speedup_cfl_estimate(double cfl_fine, double cfl_coarse, double cost_ratio,
                            int n_processors, int n_iterations, CflTrailingTerm form) {
  if (!(cfl_fine > 0.0) || !(cfl_coarse > 0.0) || !(cost_ratio > 0.0) || n_processors < 1 ||
      n_iterations < 1) {
    throw std::invalid_argument("speedup estimate needs positive inputs");
  }
  const double it = n_iterations;
  const double trailing = form == CflTrailingTerm::iterations_over_processors
                              ? it / n_processors
                              : n_processors / it;
  return 1.0 / ((1.0 + it) * (cfl_fine / cfl_coarse) * cost_ratio + trailing);
}

} // namespace pitwave
