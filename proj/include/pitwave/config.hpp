#pragma once

#include "pitwave/integrators.hpp"
#include "pitwave/mesh.hpp"
#include "pitwave/parareal.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pitwave {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A complete, validated experiment description.
struct ExperimentConfig {
  ModelKind model = ModelKind::acoustic_advection;
  int nx = 40;
  int ny = 40;
  double lx = 1.0;
  double ly = 1.0;
  double t_end = 2.0;
  double sound_speed = 30.0;
  AdvectingVelocity velocity = SolidBodyRotation{};
  double bump_x0 = 0.5;
  double bump_y0 = 0.5;

  PropagatorSpec fine;
  PropagatorSpec coarse;

  int n_processors = 6;
  int n_iterations = 2;
  std::optional<double> tolerance;
  double rank_tolerance = 1e-10;

  double probe_x = 0.49;
  double probe_y = 0.34;
  std::string output_dir = ".";
  int workers = 1;
  /// Write field snapshots every this many windows (0: initial and final only).
  int snapshot_every = 0;
  /// tau_c / tau_f for the estimate mode; measured when absent.
  std::optional<double> cost_ratio;

  Grid2D grid() const { return Grid2D(nx, ny, lx, ly); }
  double fine_step() const { return step_size(fine, grid()); }
  double coarse_step() const { return step_size(coarse, grid()); }
  /// Fine steps per coarse step.
  long fine_per_coarse() const;
  int windows() const;
  PitConfig pit(PitMode mode) const;
  Eigen::VectorXd initial_state() const;

  /// Checks every cross-parameter constraint; throws ConfigError naming the
  /// offending keys.
  void validate() const;
};

/// Keys that have no default.
const std::vector<std::string>& required_config_keys();

/// Parses `key = value` lines ('#' starts a comment) and validates the result.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Worker count from the PIT_WORKERS environment variable, when set.
std::optional<int> workers_from_environment();

} // namespace pitwave
