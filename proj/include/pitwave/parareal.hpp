#pragma once

#include "pitwave/integrators.hpp"
#include "pitwave/subspace.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace pitwave {

enum class PitMode { original, kse };

/// Accumulated wall time per phase of the iteration. Fine time is the wall
/// time of the concurrent predictor loop, not the sum over workers.
struct PhaseTimes {
  double coarse = 0.0;
  double fine = 0.0;
  double qr = 0.0;
  long coarse_calls = 0;
  long fine_calls = 0;
  long qr_calls = 0;

  double total() const { return coarse + fine + qr; }
  PhaseTimes& operator+=(const PhaseTimes& other);
};

struct PararealOptions {
  /// Coarse intervals per window; one per processor.
  int n_intervals = 1;
  int n_iterations = 1;
  /// Stop early once the iteration residual falls below this value.
  std::optional<double> tolerance;
  int workers = 1;
  double rank_tolerance = 1e-10;

  void validate() const;
};

struct WindowResult {
  /// States at the n_intervals + 1 coarse points of the window; front() is the
  /// window's initial value.
  std::vector<Eigen::VectorXd> endpoints;
  /// r^k for every iteration performed.
  std::vector<double> residuals;
  /// Subspace rank after each update (enhanced mode only).
  std::vector<Eigen::Index> subspace_ranks;
  PhaseTimes times;
  std::optional<Subspace> subspace;
};

/// max_i || next[i] - prev[i] ||_2
double iteration_residual(std::span<const Eigen::VectorXd> prev,
                          std::span<const Eigen::VectorXd> next);

/// One parallel step of the original iteration over n_intervals coarse
/// intervals of length dt starting at t_start.
WindowResult parareal_window(const Propagator& fine, const Propagator& coarse,
                             const PararealOptions& options, const Eigen::VectorXd& q_start,
                             double t_start, double dt);

/// One parallel step of the Krylov-subspace-enhanced iteration. The subspace
/// starts empty; both propagators must be linear and autonomous.
WindowResult kse_parareal_window(const Propagator& fine, const Propagator& coarse,
                                 const PararealOptions& options, const Eigen::VectorXd& q_start,
                                 double t_start, double dt);

struct PitConfig {
  PitMode mode = PitMode::kse;
  int n_processors = 1;
  int n_iterations = 1;
  std::optional<double> tolerance;
  int workers = 1;
  double rank_tolerance = 1e-10;
  /// Coarse interval length.
  double coarse_step = 0.0;
};

/// Called after each completed window with its 1-based index, the time
/// reached and the window result. Returning false stops the run.
using WindowObserver = std::function<bool(int, double, const WindowResult&)>;

struct RunReport {
  /// Final state of every completed window; entry 0 is the initial value.
  std::vector<Eigen::VectorXd> window_states;
  std::vector<double> window_times;
  /// Residual history per window.
  std::vector<std::vector<double>> residuals;
  PhaseTimes times;
  /// False when the observer stopped the run early.
  bool completed = true;
};

/// Number of windows M_c / N_p covering [0, t_end]; throws when t_end is not a
/// whole number of coarse steps or that number is not a multiple of N_p.
int window_count(double t_end, double coarse_step, int n_processors);

/// Chains parallel steps over [0, t_end], seeding each window with the last
/// corrected endpoint of the previous one.
RunReport run_windowed(const Propagator& fine, const Propagator& coarse, const PitConfig& config,
                       const Eigen::VectorXd& q0, double t_end, const WindowObserver& observer = {});

/// Runs one propagator sequentially over the same window structure so that
/// its diagnostics are sampled at the same times as a parallel run.
RunReport run_sequential(const Propagator& prop, const PitConfig& config, const Eigen::VectorXd& q0,
                         double t_end, const WindowObserver& observer = {});

} // namespace pitwave
