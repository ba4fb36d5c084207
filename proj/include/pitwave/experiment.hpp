#pragma once

#include "pitwave/config.hpp"
#include "pitwave/parareal.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pitwave {

enum class RunMode { fine_seq, coarse_seq, parareal, kse, estimate };

RunMode parse_run_mode(std::string_view name);
std::string_view run_mode_name(RunMode mode);

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_blow_up = 3;

struct ExperimentResult {
  int exit_code = exit_ok;
  std::string message;
  /// Last time at which the state was finite.
  double t_reached = 0.0;
  std::vector<double> window_times;
  std::vector<Eigen::VectorXd> window_states;
  std::vector<std::vector<double>> residuals;
  PhaseTimes times;
  /// Set by the estimate mode.
  std::optional<double> speedup;
  std::optional<double> cost_ratio;
};

/// Runs one mode and writes its CSV files into cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg, RunMode mode, std::ostream& log);

/// Time label used in field file names.
std::string time_label(double t);

struct FieldFile {
  int nx = 0;
  int ny = 0;
  /// Row j holds y index j, x fastest.
  std::vector<double> values;
};

void write_field_csv(const std::filesystem::path& path, std::span<const double> values, int nx, int ny);
FieldFile read_field_csv(const std::filesystem::path& path);

/// Writes one file per field of `state`, named <var>_<time_label(t)>.csv.
void write_state_fields(const std::filesystem::path& dir, const State& state, double t);

/// Mean per-step wall time of the coarse and fine propagators from a few
/// timed steps; returns tau_c / tau_f.
double measure_cost_ratio(const ExperimentConfig& cfg, int repeats = 3);

struct ComparisonRow {
  std::string time;
  double relative_l2_error = 0.0;
};

/// Relative l2 error of run `a` against reference run `b` at every time for
/// which both directories hold field files.
std::vector<ComparisonRow> compare_runs(const std::filesystem::path& a, const std::filesystem::path& b);

void write_comparison_csv(const std::filesystem::path& path, const std::vector<ComparisonRow>& rows);

} // namespace pitwave
