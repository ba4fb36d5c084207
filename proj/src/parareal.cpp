#include "pitwave/parareal.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pitwave {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs body(i) for i in [0, n). Each index writes only its own output slot,
// so results do not depend on the worker count.
template <class Body>
void parallel_for(int n, int workers, const Body& body) {
  std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for num_threads(workers) schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!error) error = std::current_exception();
    }
  }
  (void)workers;
  if (error) std::rethrow_exception(error);
}

std::span<const Eigen::VectorXd> points(const std::vector<Eigen::VectorXd>& v) {
  return {v.data() + 1, v.size() - 1};
}

void check_window_inputs(const PararealOptions& options, double dt) {
  options.validate();
  if (!(dt > 0.0)) {
    throw std::invalid_argument("coarse interval length must be positive");
  }
}

} // namespace

PhaseTimes& PhaseTimes::operator+=(const PhaseTimes& other) {
  coarse += other.coarse;
  fine += other.fine;
  qr += other.qr;
  coarse_calls += other.coarse_calls;
  fine_calls += other.fine_calls;
  qr_calls += other.qr_calls;
  return *this;
}

void PararealOptions::validate() const {
  if (n_intervals < 1) throw std::invalid_argument("need at least one coarse interval per window");
  if (n_iterations < 0) throw std::invalid_argument("iteration count must be non-negative");
  if (workers < 1) throw std::invalid_argument("worker count must be at least 1");
  if (tolerance && !(*tolerance >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");
}

double iteration_residual(std::span<const Eigen::VectorXd> prev,
                          std::span<const Eigen::VectorXd> next) {
  if (prev.size() != next.size()) {
    throw std::invalid_argument("residual needs state lists of equal length");
  }
  double r = 0.0;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    r = std::max(r, (next[i] - prev[i]).norm());
  }
  return r;
}

WindowResult parareal_window(const Propagator& fine, const Propagator& coarse,
                             const PararealOptions& options, const Eigen::VectorXd& q_start,
                             double t_start, double dt) {
  check_window_inputs(options, dt);
  const int n = options.n_intervals;
  auto t = [&](int i) { return t_start + i * dt; };

  WindowResult result;
  std::vector<Eigen::VectorXd>& q = result.endpoints;
  q.assign(n + 1, Eigen::VectorXd());
  std::vector<Eigen::VectorXd> coarse_old(n + 1);
  std::vector<Eigen::VectorXd> predicted(n + 1);
  std::vector<Eigen::VectorXd> next(n + 1);

  auto start = Clock::now();
  q[0] = q_start;
  for (int i = 0; i < n; ++i) {
    coarse_old[i + 1] = coarse.advance(q[i], t(i), t(i + 1));
    q[i + 1] = coarse_old[i + 1];
  }
  result.times.coarse += seconds_since(start);
  result.times.coarse_calls += n;

  for (int k = 0; k < options.n_iterations; ++k) {
    start = Clock::now();
    parallel_for(n, options.workers,
                 [&](int i) { predicted[i + 1] = fine.advance(q[i], t(i), t(i + 1)); });
    result.times.fine += seconds_since(start);
    result.times.fine_calls += n;

    start = Clock::now();
    next[0] = q_start;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd g = coarse.advance(next[i], t(i), t(i + 1));
      next[i + 1] = g + predicted[i + 1] - coarse_old[i + 1];
      coarse_old[i + 1] = std::move(g);
    }
    result.times.coarse += seconds_since(start);
    result.times.coarse_calls += n;

    const double r = iteration_residual(points(q), points(next));
    result.residuals.push_back(r);
    std::swap(q, next);
    if (options.tolerance && r < *options.tolerance) {
      break;
    }
  }
  return result;
}

WindowResult kse_parareal_window(const Propagator& fine, const Propagator& coarse,
                                 const PararealOptions& options, const Eigen::VectorXd& q_start,
                                 double t_start, double dt) {
  check_window_inputs(options, dt);
  if (!fine.linear_autonomous() || !coarse.linear_autonomous()) {
    throw std::invalid_argument(
        "the subspace-enhanced iteration requires linear, autonomous propagators");
  }
  const int n = options.n_intervals;
  auto t = [&](int i) { return t_start + i * dt; };

  WindowResult result;
  std::vector<Eigen::VectorXd>& q = result.endpoints;
  q.assign(n + 1, Eigen::VectorXd());
  std::vector<Eigen::VectorXd> predicted(n + 1);
  std::vector<Eigen::VectorXd> enhanced_old(n);
  std::vector<Eigen::VectorXd> next(n + 1);
  Subspace sub(q_start.size(), options.rank_tolerance);

  auto start = Clock::now();
  q[0] = q_start;
  for (int i = 0; i < n; ++i) {
    q[i + 1] = coarse.advance(q[i], t(i), t(i + 1));
  }
  result.times.coarse += seconds_since(start);
  result.times.coarse_calls += n;

  for (int k = 0; k < options.n_iterations; ++k) {
    start = Clock::now();
    parallel_for(n, options.workers,
                 [&](int i) { predicted[i + 1] = fine.advance(q[i], t(i), t(i + 1)); });
    result.times.fine += seconds_since(start);
    result.times.fine_calls += n;

    start = Clock::now();
    sub.update(std::span<const Eigen::VectorXd>(q.data(), n), points(predicted));
    result.times.qr += seconds_since(start);
    result.times.qr_calls += 1;
    result.subspace_ranks.push_back(sub.rank());

    start = Clock::now();
    parallel_for(n, options.workers, [&](int i) {
      enhanced_old[i] = kse_coarse(sub, coarse, q[i], t(i), t(i + 1));
    });
    next[0] = q_start;
    for (int i = 0; i < n; ++i) {
      next[i + 1] = kse_coarse(sub, coarse, next[i], t(i), t(i + 1)) + predicted[i + 1] -
                    enhanced_old[i];
    }
    result.times.coarse += seconds_since(start);
    result.times.coarse_calls += 2L * n;

    const double r = iteration_residual(points(q), points(next));
    result.residuals.push_back(r);
    std::swap(q, next);
    if (options.tolerance && r < *options.tolerance) {
      break;
    }
  }
  result.subspace = std::move(sub);
  return result;
}

int window_count(double t_end, double coarse_step, int n_processors) {
  if (n_processors < 1) {
    throw std::invalid_argument("number of processors must be at least 1");
  }
  if (!(coarse_step > 0.0)) {
    throw std::invalid_argument("coarse step must be positive");
  }
  const long m_c = step_count(0.0, t_end, coarse_step);
  if (m_c % n_processors != 0) {
    throw std::invalid_argument("number of coarse steps M_c = " + std::to_string(m_c) +
                                " is not a multiple of N_p = " + std::to_string(n_processors));
  }
  return static_cast<int>(m_c / n_processors);
}

RunReport run_windowed(const Propagator& fine, const Propagator& coarse, const PitConfig& config,
                       const Eigen::VectorXd& q0, double t_end, const WindowObserver& observer) {
  const int windows = window_count(t_end, config.coarse_step, config.n_processors);
  PararealOptions options;
  options.n_intervals = config.n_processors;
  options.n_iterations = config.n_iterations;
  options.tolerance = config.tolerance;
  options.workers = config.workers;
  options.rank_tolerance = config.rank_tolerance;

  RunReport report;
  report.window_states.push_back(q0);
  report.window_times.push_back(0.0);
  const double span = config.n_processors * config.coarse_step;
  for (int w = 0; w < windows; ++w) {
    const double t0 = w * span;
    WindowResult res =
        config.mode == PitMode::kse
            ? kse_parareal_window(fine, coarse, options, report.window_states.back(), t0,
                                  config.coarse_step)
            : parareal_window(fine, coarse, options, report.window_states.back(), t0,
                              config.coarse_step);
    report.times += res.times;
    report.residuals.push_back(res.residuals);
    report.window_states.push_back(res.endpoints.back());
    report.window_times.push_back((w + 1) * span);
    if (observer && !observer(w + 1, (w + 1) * span, res)) {
      report.completed = false;
      break;
    }
  }
  return report;
}

RunReport run_sequential(const Propagator& prop, const PitConfig& config, const Eigen::VectorXd& q0,
                         double t_end, const WindowObserver& observer) {
  const int windows = window_count(t_end, config.coarse_step, config.n_processors);
  const double span = config.n_processors * config.coarse_step;
  RunReport report;
  report.window_states.push_back(q0);
  report.window_times.push_back(0.0);
  for (int w = 0; w < windows; ++w) {
    const double t0 = w * span;
    WindowResult res;
    res.endpoints.push_back(report.window_states.back());
    const auto start = Clock::now();
    for (int i = 0; i < config.n_processors; ++i) {
      res.endpoints.push_back(prop.advance(res.endpoints.back(), t0 + i * config.coarse_step,
                                           t0 + (i + 1) * config.coarse_step));
    }
    res.times.fine = seconds_since(start);
    res.times.fine_calls = config.n_processors;
    report.times += res.times;
    report.residuals.emplace_back();
    report.window_states.push_back(res.endpoints.back());
    report.window_times.push_back((w + 1) * span);
    if (observer && !observer(w + 1, (w + 1) * span, res)) {
      report.completed = false;
      break;
    }
  }
  return report;
}

} // namespace pitwave
