#include "pitwave/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace pitwave {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model",          "nx",             "ny",              "lx",
      "ly",             "t_end",          "sound_speed",     "velocity",
      "velocity_u",     "velocity_v",     "rotation_rate",   "rotation_xc",
      "rotation_yc",    "bump_x0",        "bump_y0",         "fine_scheme",
      "fine_cfl",       "fine_flux_order", "fine_nu",        "fine_n_sound",
      "coarse_scheme",  "coarse_cfl",     "coarse_flux_order", "coarse_nu",
      "coarse_n_sound", "n_p",            "n_it",            "tolerance",
      "rank_tolerance", "probe_x",        "probe_y",         "output_dir",
      "workers",        "snapshot_every", "cost_ratio"};
  return keys;
}

class KeyValues {
public:
  explicit KeyValues(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key, std::string fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double number(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': expected a number, got '" + it->second + "'");
    }
  }

  int integer(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const int v = std::stoi(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': expected an integer, got '" + it->second + "'");
    }
  }

private:
  std::map<std::string, std::string> values_;
};

template <class Fn>
auto with_key(const std::string& keys, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(keys + ": " + e.what());
  }
}

} // namespace

const std::vector<std::string>& required_config_keys() {
  static const std::vector<std::string> keys = {"model", "nx",         "ny",  "t_end",
                                                "fine_cfl", "coarse_cfl", "n_p", "n_it"};
  return keys;
}

long ExperimentConfig::fine_per_coarse() const {
  return step_count(0.0, coarse_step(), fine_step());
}

int ExperimentConfig::windows() const {
  return window_count(t_end, coarse_step(), n_processors);
}

PitConfig ExperimentConfig::pit(PitMode mode) const {
  PitConfig p;
  p.mode = mode;
  p.n_processors = n_processors;
  p.n_iterations = n_iterations;
  p.tolerance = tolerance;
  p.workers = workers;
  p.rank_tolerance = rank_tolerance;
  p.coarse_step = coarse_step();
  return p;
}

Eigen::VectorXd ExperimentConfig::initial_state() const {
  const Grid2D g = grid();
  State s(state_kind(model), g);
  const Eigen::VectorXd bump = init_cosine_bump(g, bump_x0, bump_y0);
  std::copy(bump.begin(), bump.end(), s.field(0).begin());
  return s.values();
}

void ExperimentConfig::validate() const {
  const Grid2D g = with_key("nx/ny/lx/ly", [&] { return grid(); });
  if (!(t_end > 0.0)) throw ConfigError("t_end: must be positive");
  if (model == ModelKind::acoustic_advection && !(sound_speed > 0.0)) {
    throw ConfigError("sound_speed: must be positive");
  }
  with_key("fine_*", [&] { fine.validate(); });
  with_key("coarse_*", [&] { coarse.validate(); });
  if (fine.model.kind != model || coarse.model.kind != model) {
    throw ConfigError("model: propagators must use the configured model");
  }
  if (n_processors < 1) throw ConfigError("n_p: must be at least 1");
  if (n_iterations < 0) throw ConfigError("n_it: must be non-negative");
  if (workers < 1) throw ConfigError("workers: must be at least 1");
  if (snapshot_every < 0) throw ConfigError("snapshot_every: must be non-negative");
  if (tolerance && !(*tolerance >= 0.0)) throw ConfigError("tolerance: must be non-negative");
  if (!(rank_tolerance > 0.0 && rank_tolerance < 1.0)) {
    throw ConfigError("rank_tolerance: must lie in (0, 1)");
  }
  if (cost_ratio && !(*cost_ratio > 0.0)) throw ConfigError("cost_ratio: must be positive");
  if (probe_x < 0.0 || probe_x > lx || probe_y < 0.0 || probe_y > ly) {
    throw ConfigError("probe_x/probe_y: probe must lie inside the domain");
  }
  if (bump_x0 < 0.0 || bump_x0 > lx || bump_y0 < 0.0 || bump_y0 > ly) {
    throw ConfigError("bump_x0/bump_y0: bump center must lie inside the domain");
  }
  with_key("fine_cfl/coarse_cfl (coarse step must be an integer multiple of the fine step)",
           [&] { return fine_per_coarse(); });
  with_key("t_end/coarse_cfl/n_p", [&] { return windows(); });
  (void)g;
}

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> raw;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (!known_keys().count(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (raw.count(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    raw[key] = value;
  }

  std::vector<std::string> missing;
  for (const auto& key : required_config_keys()) {
    if (!raw.count(key)) missing.push_back(key);
  }
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
  }

  const KeyValues kv(std::move(raw));
  ExperimentConfig cfg;

  const std::string model = kv.text("model", "");
  if (model == "advection") {
    cfg.model = ModelKind::advection;
  } else if (model == "acoustic_advection") {
    cfg.model = ModelKind::acoustic_advection;
  } else {
    throw ConfigError("model: expected advection or acoustic_advection, got '" + model + "'");
  }
  cfg.nx = kv.integer("nx", 0);
  cfg.ny = kv.integer("ny", 0);
  cfg.lx = kv.number("lx", 1.0);
  cfg.ly = kv.number("ly", 1.0);
  cfg.t_end = kv.number("t_end", 0.0);
  cfg.sound_speed = kv.number("sound_speed", 30.0);

  const std::string velocity = kv.text("velocity", "solid_body");
  if (velocity == "constant") {
    cfg.velocity = ConstantVelocity{kv.number("velocity_u", 1.0), kv.number("velocity_v", 1.0)};
  } else if (velocity == "solid_body") {
    cfg.velocity = SolidBodyRotation{kv.number("rotation_rate", std::numbers::pi),
                                     kv.number("rotation_xc", 0.5), kv.number("rotation_yc", 0.5)};
  } else {
    throw ConfigError("velocity: expected constant or solid_body, got '" + velocity + "'");
  }
  cfg.bump_x0 = kv.number("bump_x0", 0.5);
  cfg.bump_y0 = kv.number("bump_y0", cfg.model == ModelKind::advection ? 0.5 : 0.65);

  auto propagator = [&](const std::string& prefix, const std::string& default_scheme,
                        int default_order, double default_nu, int default_n_sound) {
    PropagatorSpec spec;
    spec.scheme = with_key(prefix + "_scheme", [&] {
      return parse_scheme(kv.text(prefix + "_scheme", default_scheme));
    });
    spec.cfl = kv.number(prefix + "_cfl", 0.0);
    spec.n_sound = kv.integer(prefix + "_n_sound", default_n_sound);
    spec.model.kind = cfg.model;
    spec.model.sound_speed = cfg.sound_speed;
    spec.model.velocity = cfg.velocity;
    spec.model.advective_order = with_key(prefix + "_flux_order", [&] {
      return FluxOrder(kv.integer(prefix + "_flux_order", default_order));
    });
    spec.model.nu = kv.number(prefix + "_nu", default_nu);
    return spec;
  };
  const bool acoustic = cfg.model == ModelKind::acoustic_advection;
  cfg.fine = propagator("fine", "rk3", 6, 0.005, 1);
  cfg.coarse = propagator("coarse", acoustic ? "split_fe_fb" : "rk3", 1, 0.0, acoustic ? 4 : 1);

  cfg.n_processors = kv.integer("n_p", 0);
  cfg.n_iterations = kv.integer("n_it", 0);
  if (kv.has("tolerance")) cfg.tolerance = kv.number("tolerance", 0.0);
  cfg.rank_tolerance = kv.number("rank_tolerance", 1e-10);
  cfg.probe_x = kv.number("probe_x", 0.49);
  cfg.probe_y = kv.number("probe_y", 0.34);
  cfg.output_dir = kv.text("output_dir", ".");
  cfg.workers = kv.integer("workers", 1);
  cfg.snapshot_every = kv.integer("snapshot_every", 0);
  if (kv.has("cost_ratio")) cfg.cost_ratio = kv.number("cost_ratio", 0.0);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::optional<int> workers_from_environment() {
  const char* env = std::getenv("PIT_WORKERS");
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const int w = std::stoi(env, &used);
    if (used != std::string(env).size() || w < 1) throw std::invalid_argument("bad");
    return w;
  } catch (const std::exception&) {
    throw ConfigError("PIT_WORKERS: expected a positive integer, got '" + std::string(env) + "'");
  }
}

} // namespace pitwave
