// Command-line driver: pitwave <mode> --config <path> --out <dir> [--workers N]
//                      pitwave compare --a <dir> --b <dir> [--out <file>]

#include "pitwave/config.hpp"
#include "pitwave/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace pitwave;

  CLI::App app{"Parallel-in-time integration of 2D advection and acoustic-advection"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  struct ModeCommand {
    const char* name;
    const char* help;
    CLI::App* cmd = nullptr;
  };
  ModeCommand modes[] = {
      {"fine-seq", "sequential run with the fine propagator"},
      {"coarse-seq", "sequential run with the coarse propagator"},
      {"parareal", "original parareal iteration"},
      {"kse", "Krylov-subspace-enhanced parareal iteration"},
      {"estimate", "speedup estimate from Courant numbers and step cost ratio"},
  };
  for (auto& m : modes) {
    m.cmd = app.add_subcommand(m.name, m.help);
    m.cmd->add_option("--config", config_path, "key = value configuration file")->required();
    m.cmd->add_option("--out", out_dir, "output directory (overrides output_dir)")->required();
    m.cmd->add_option("--workers", workers, "worker threads for the fine loop")
        ->check(CLI::PositiveNumber);
  }

  std::string dir_a, dir_b, compare_out;
  auto* compare = app.add_subcommand("compare", "relative l2 error of run a against reference run b");
  compare->add_option("--a", dir_a, "run directory")->required();
  compare->add_option("--b", dir_b, "reference run directory")->required();
  compare->add_option("--out", compare_out, "CSV file for the report (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (compare->parsed()) {
    try {
      const auto rows = compare_runs(dir_a, dir_b);
      if (compare_out.empty()) {
        std::cout << "t,relative_l2_error\n";
        for (const auto& r : rows) {
          std::cout << r.time << ',' << r.relative_l2_error << '\n';
        }
      } else {
        write_comparison_csv(compare_out, rows);
      }
      return rows.empty() ? 1 : 0;
    } catch (const std::exception& e) {
      std::cerr << "compare: " << e.what() << '\n';
      return 1;
    }
  }

  RunMode mode{};
  for (const auto& m : modes) {
    if (m.cmd->parsed()) mode = parse_run_mode(m.name);
  }

  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    if (auto env = workers_from_environment()) cfg.workers = *env;
    if (workers > 0) cfg.workers = workers;
    cfg.output_dir = out_dir;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config_error;
  }

  try {
    const ExperimentResult res = run_experiment(cfg, mode, std::cout);
    if (res.exit_code != exit_ok) std::cerr << res.message << '\n';
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
