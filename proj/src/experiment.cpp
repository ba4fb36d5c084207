#include "pitwave/experiment.hpp"

#include "pitwave/diagnostics.hpp"
#include "pitwave/perfmodel.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pitwave {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* field_name(StateKind kind, int k) {
  static const char* acoustic[] = {"u", "v", "pi"};
  return kind == StateKind::scalar ? "q" : acoustic[k];
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

struct SeriesWriter {
  const ExperimentConfig& cfg;
  Grid2D grid;
  StateKind kind;
  std::ofstream out;

  SeriesWriter(const ExperimentConfig& c, const fs::path& dir)
      : cfg(c), grid(c.grid()), kind(state_kind(c.model)), out(open_output(dir / "series.csv")) {
    out << "window_index,t,max_norm,energy,probe_u,probe_pi\n";
  }

  void row(int window, double t, const Eigen::VectorXd& q) {
    const State s(kind, grid, q);
    const double probe_u = sample_probe(s, grid, cfg.probe_x, cfg.probe_y, 0);
    const double probe_pi = kind == StateKind::scalar
                                ? 0.0
                                : sample_probe(s, grid, cfg.probe_x, cfg.probe_y, 2);
    out << window << ',' << format_double(t) << ',' << format_double(max_norm(q)) << ','
        << format_double(total_energy(s, grid)) << ',' << format_double(probe_u) << ','
        << format_double(probe_pi) << '\n';
  }
};

void write_timing(const fs::path& path, const PhaseTimes& times) {
  auto out = open_output(path);
  out << "phase,total_seconds,fraction\n";
  const double total = times.total();
  const std::pair<const char*, double> phases[] = {
      {"coarse", times.coarse}, {"fine", times.fine}, {"qr", times.qr}};
  for (const auto& [name, secs] : phases) {
    out << name << ',' << format_double(secs) << ','
        << format_double(total > 0.0 ? secs / total : 0.0) << '\n';
  }
}

ExperimentResult run_estimate(const ExperimentConfig& cfg, std::ostream& log) {
  ExperimentResult res;
  const double ratio = cfg.cost_ratio ? *cfg.cost_ratio : measure_cost_ratio(cfg);
  const double s = speedup_cfl_estimate(cfg.fine.cfl, cfg.coarse.cfl, ratio, cfg.n_processors,
                                        cfg.n_iterations);
  res.speedup = s;
  res.cost_ratio = ratio;
  auto out = open_output(fs::path(cfg.output_dir) / "estimate.csv");
  out << "quantity,value\n"
      << "fine_cfl," << format_double(cfg.fine.cfl) << '\n'
      << "coarse_cfl," << format_double(cfg.coarse.cfl) << '\n'
      << "cost_ratio," << format_double(ratio) << '\n'
      << "n_p," << cfg.n_processors << '\n'
      << "n_it," << cfg.n_iterations << '\n'
      << "speedup," << format_double(s) << '\n';
  char line[80];
  std::snprintf(line, sizeof line, "estimated speedup s = %.4f (cost ratio %.4f)", s, ratio);
  log << line << '\n';
  res.message = line;
  return res;
}

} // namespace

RunMode parse_run_mode(std::string_view name) {
  if (name == "fine-seq") return RunMode::fine_seq;
  if (name == "coarse-seq") return RunMode::coarse_seq;
  if (name == "parareal") return RunMode::parareal;
  if (name == "kse") return RunMode::kse;
  if (name == "estimate") return RunMode::estimate;
  throw std::invalid_argument("unknown mode '" + std::string(name) +
                              "' (expected fine-seq, coarse-seq, parareal, kse or estimate)");
}

std::string_view run_mode_name(RunMode mode) {
  switch (mode) {
  case RunMode::fine_seq: return "fine-seq";
  case RunMode::coarse_seq: return "coarse-seq";
  case RunMode::parareal: return "parareal";
  case RunMode::kse: return "kse";
  case RunMode::estimate: return "estimate";
  }
  return "?";
}

std::string time_label(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

void write_field_csv(const fs::path& path, std::span<const double> values, int nx, int ny) {
  if (nx < 1 || ny < 1 || values.size() != static_cast<std::size_t>(nx) * ny) {
    throw std::invalid_argument("field does not match its stated shape");
  }
  auto out = open_output(path);
  out << "nx," << nx << "\nny," << ny << '\n';
  std::string line;
  for (int j = 0; j < ny; ++j) {
    line.clear();
    for (int i = 0; i < nx; ++i) {
      if (i) line += ',';
      line += format_double(values[static_cast<std::size_t>(j) * nx + i]);
    }
    out << line << '\n';
  }
}

FieldFile read_field_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  FieldFile f;
  std::string line;
  auto header = [&](const char* key) {
    if (!std::getline(in, line) || line.rfind(std::string(key) + ",", 0) != 0) {
      throw std::runtime_error(path.string() + ": missing " + key + " header");
    }
    return std::atoi(line.c_str() + std::char_traits<char>::length(key) + 1);
  };
  f.nx = header("nx");
  f.ny = header("ny");
  if (f.nx < 1 || f.ny < 1) throw std::runtime_error(path.string() + ": bad shape header");
  f.values.reserve(static_cast<std::size_t>(f.nx) * f.ny);
  for (int j = 0; j < f.ny; ++j) {
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": too few rows");
    const char* p = line.c_str();
    for (int i = 0; i < f.nx; ++i) {
      char* end = nullptr;
      f.values.push_back(std::strtod(p, &end));
      if (end == p) throw std::runtime_error(path.string() + ": bad value in row " + std::to_string(j));
      p = end;
      if (i + 1 < f.nx) {
        if (*p != ',') throw std::runtime_error(path.string() + ": too few columns");
        ++p;
      }
    }
    if (*p != '\0' && *p != '\r') throw std::runtime_error(path.string() + ": too many columns");
  }
  return f;
}

void write_state_fields(const fs::path& dir, const State& state, double t) {
  const std::string label = time_label(t);
  for (int k = 0; k < field_count(state.kind()); ++k) {
    write_field_csv(dir / (std::string(field_name(state.kind(), k)) + "_" + label + ".csv"),
                    state.field(k), state.nx(), state.ny());
  }
}

double measure_cost_ratio(const ExperimentConfig& cfg, int repeats) {
  using Clock = std::chrono::steady_clock;
  const Grid2D g = cfg.grid();
  const SchemePropagator fine(g, cfg.fine);
  const SchemePropagator coarse(g, cfg.coarse);
  auto time_steps = [&](const SchemePropagator& p) {
    Eigen::VectorXd q = cfg.initial_state();
    p.step(q, p.step_size());
    const auto start = Clock::now();
    for (int r = 0; r < repeats; ++r) p.step(q, p.step_size());
    return std::chrono::duration<double>(Clock::now() - start).count() / repeats;
  };
  const double tau_f = time_steps(fine);
  const double tau_c = time_steps(coarse);
  if (!(tau_f > 0.0)) throw std::runtime_error("fine step too fast to time");
  return tau_c / tau_f;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, RunMode mode, std::ostream& log) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  if (mode == RunMode::estimate) return run_estimate(cfg, log);

  const Grid2D g = cfg.grid();
  const StateKind kind = state_kind(cfg.model);
  const SchemePropagator fine(g, cfg.fine);
  const SchemePropagator coarse(g, cfg.coarse);
  const PitConfig pit = cfg.pit(mode == RunMode::parareal ? PitMode::original : PitMode::kse);
  const int windows = cfg.windows();
  const Eigen::VectorXd q0 = cfg.initial_state();

  ExperimentResult res;
  SeriesWriter series(cfg, dir);
  auto residuals = open_output(dir / "residuals.csv");
  residuals << "window_index,iteration,r_k\n";

  series.row(0, 0.0, q0);
  write_state_fields(dir, State(kind, g, q0), 0.0);
  bool blew_up = false;

  const WindowObserver observer = [&](int w, double t, const WindowResult& wr) {
    const Eigen::VectorXd& q = wr.endpoints.back();
    series.row(w, t, q);
    for (std::size_t k = 0; k < wr.residuals.size(); ++k) {
      residuals << w << ',' << k << ',' << format_double(wr.residuals[k]) << '\n';
    }
    if (!q.allFinite()) {
      blew_up = true;
      return false;
    }
    res.t_reached = t;
    const bool last = w == windows;
    if (last || (cfg.snapshot_every > 0 && w % cfg.snapshot_every == 0)) {
      write_state_fields(dir, State(kind, g, q), t);
    }
    return true;
  };

  RunReport report;
  switch (mode) {
  case RunMode::fine_seq:
    report = run_sequential(fine, pit, q0, cfg.t_end, observer);
    break;
  case RunMode::coarse_seq:
    report = run_sequential(coarse, pit, q0, cfg.t_end, observer);
    std::swap(report.times.coarse, report.times.fine);
    std::swap(report.times.coarse_calls, report.times.fine_calls);
    break;
  default:
    report = run_windowed(fine, coarse, pit, q0, cfg.t_end, observer);
    break;
  }
  write_timing(dir / "timing.csv", report.times);

  res.window_times = std::move(report.window_times);
  res.window_states = std::move(report.window_states);
  res.residuals = std::move(report.residuals);
  res.times = report.times;
  if (blew_up) {
    res.exit_code = exit_blow_up;
    res.message = "non-finite state after window ending at t = " +
                  format_double(res.window_times.back()) +
                  "; last finite state at t = " + format_double(res.t_reached);
  } else {
    res.message = std::string(run_mode_name(mode)) + " completed " + std::to_string(windows) +
                  " windows to t = " + format_double(res.t_reached);
  }
  log << res.message << '\n';
  return res;
}

std::vector<ComparisonRow> compare_runs(const fs::path& a, const fs::path& b) {
  // label -> variable -> path
  using Index = std::map<std::string, std::map<std::string, fs::path>>;
  auto scan = [](const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    Index idx;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
      const std::string stem = entry.path().stem().string();
      const auto us = stem.find('_');
      if (us == std::string::npos) continue;
      const std::string var = stem.substr(0, us);
      if (var != "q" && var != "u" && var != "v" && var != "pi") continue;
      const std::string label = stem.substr(us + 1);
      char* end = nullptr;
      std::strtod(label.c_str(), &end);
      if (label.empty() || *end != '\0') continue;
      idx[label][var] = entry.path();
    }
    return idx;
  };
  const Index ia = scan(a);
  const Index ib = scan(b);

  std::vector<std::string> labels;
  for (const auto& [label, vars] : ia) {
    if (ib.count(label)) labels.push_back(label);
  }
  std::sort(labels.begin(), labels.end(), [](const std::string& x, const std::string& y) {
    return std::strtod(x.c_str(), nullptr) < std::strtod(y.c_str(), nullptr);
  });

  std::vector<ComparisonRow> rows;
  for (const auto& label : labels) {
    const auto& va = ia.at(label);
    const auto& vb = ib.at(label);
    std::vector<double> xa, xb;
    for (const char* var : {"q", "u", "v", "pi"}) {
      const bool in_a = va.count(var) != 0;
      if (in_a != (vb.count(var) != 0)) {
        throw std::runtime_error("variable sets differ at t = " + label);
      }
      if (!in_a) continue;
      const FieldFile fa = read_field_csv(va.at(var));
      const FieldFile fb = read_field_csv(vb.at(var));
      if (fa.nx != fb.nx || fa.ny != fb.ny) {
        throw std::runtime_error("grid shapes differ for " + std::string(var) + " at t = " + label);
      }
      xa.insert(xa.end(), fa.values.begin(), fa.values.end());
      xb.insert(xb.end(), fb.values.begin(), fb.values.end());
    }
    const Eigen::Map<const Eigen::VectorXd> ma(xa.data(), static_cast<Eigen::Index>(xa.size()));
    const Eigen::Map<const Eigen::VectorXd> mb(xb.data(), static_cast<Eigen::Index>(xb.size()));
    rows.push_back({label, relative_l2_error(ma, mb)});
  }
  return rows;
}

void write_comparison_csv(const fs::path& path, const std::vector<ComparisonRow>& rows) {
  auto out = open_output(path);
  out << "t,relative_l2_error\n";
  for (const auto& r : rows) out << r.time << ',' << format_double(r.relative_l2_error) << '\n';
}

} // namespace pitwave
