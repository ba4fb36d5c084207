#pragma once

namespace pitwave {

/// Phase costs and counts for one parallel step.
struct SpeedupInputs {
  int n_processors = 1;
  int n_iterations = 1;
  /// Coarse intervals per parallel step.
  int n_coarse = 1;
  /// Fine steps per coarse interval.
  int n_fine = 1;
  /// Wall time of one coarse step, one fine step and one subspace update.
  double tau_coarse = 1.0;
  double tau_fine = 1.0;
  double tau_qr = 0.0;

  long n_total() const { return static_cast<long>(n_coarse) * n_fine; }
  void validate() const;
};

/// N_t tau_f / [N_c tau_c + N_it (N_c tau_c + N_t/N_p tau_f) + N_it tau_qr]
double speedup_estimate(const SpeedupInputs& in);

struct SpeedupBounds {
  /// N_p / N_it
  double iterations;
  /// N_f tau_f / ((1 + N_it) tau_c)
  double coarse;
  /// N_t tau_f / (N_it tau_qr)
  double subspace_update;

  double tightest() const;
};

/// Upper bounds on speedup_estimate, each obtained by dropping all but one
/// term of its denominator. Infinite where the corresponding term vanishes.
SpeedupBounds speedup_bounds(const SpeedupInputs& in);

/// Which final denominator term speedup_cfl_estimate uses.
enum class CflTrailingTerm {
  /// N_it / N_p, the form consistent with speedup_estimate.
  iterations_over_processors,
  /// N_p / N_it; kept only to document the alternative reading.
  processors_over_iterations,
};

/// 1 / [(1 + N_it) (C_f / C_c) (tau_c / tau_f) + N_it / N_p], the estimate
/// with the subspace update neglected and step counts expressed through the
/// Courant numbers of the two propagators on a shared mesh.
double speedup_cfl_estimate(double cfl_fine, double cfl_coarse, double cost_ratio,
                            int n_processors, int n_iterations,
                            CflTrailingTerm form = CflTrailingTerm::iterations_over_processors);

} // namespace pitwave
