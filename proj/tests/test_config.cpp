#include "pitwave/config.hpp"

#include <doctest.h>

#include <cstdlib>
#include <string>

using namespace pitwave;

namespace {

const std::string baseline = R"(# acoustic-advection baseline
model = acoustic_advection
nx = 40
ny = 40
t_end = 2
fine_cfl = 0.2
coarse_cfl = 4   # split forward-backward
n_p = 6
n_it = 2
)";

} // namespace

TEST_CASE("baseline configuration") {
  const ExperimentConfig cfg = parse_config(baseline);
  CHECK(cfg.model == ModelKind::acoustic_advection);
  CHECK(cfg.nx == 40);
  CHECK(cfg.sound_speed == 30.0);
  CHECK(std::holds_alternative<SolidBodyRotation>(cfg.velocity));
  CHECK(cfg.bump_y0 == 0.65);
  CHECK(cfg.fine.scheme == Scheme::rk3);
  CHECK(cfg.fine.model.nu == 0.005);
  CHECK(cfg.coarse.scheme == Scheme::split_fe_fb);
  CHECK(cfg.coarse.n_sound == 4);
  CHECK(cfg.coarse.model.advective_order == FluxOrder(1));
  CHECK(cfg.coarse_step() == doctest::Approx(1.0 / 300.0));
  CHECK(cfg.fine_step() == doctest::Approx(1.0 / 6000.0));
  CHECK(cfg.fine_per_coarse() == 20);
  CHECK(cfg.windows() == 100);
  CHECK_FALSE(cfg.tolerance.has_value());
  CHECK(cfg.workers == 1);
  const Eigen::VectorXd q0 = cfg.initial_state();
  CHECK(q0.size() == 3 * 1600);
  CHECK(q0.head(1600).maxCoeff() > 0.9);
  CHECK(q0.tail(3200).cwiseAbs().maxCoeff() == 0.0);
  const PitConfig pit = cfg.pit(PitMode::kse);
  CHECK(pit.n_processors == 6);
  CHECK(pit.coarse_step == cfg.coarse_step());
}

TEST_CASE("advection defaults") {
  const ExperimentConfig cfg = parse_config(
      "model = advection\nnx = 40\nny = 40\nt_end = 1.08\nfine_cfl = 0.1\ncoarse_cfl = 0.6\n"
      "n_p = 6\nn_it = 2\nvelocity = constant\n");
  CHECK(cfg.coarse.scheme == Scheme::rk3);
  CHECK(cfg.bump_y0 == 0.5);
  const auto& v = std::get<ConstantVelocity>(cfg.velocity);
  CHECK(v.u == 1.0);
  CHECK(v.v == 1.0);
  CHECK(cfg.initial_state().size() == 1600);
}

TEST_CASE("coarse step that is not a multiple of the fine step is rejected") {
  std::string text = baseline;
  text.replace(text.find("fine_cfl = 0.2"), 14, "fine_cfl = 0.3");
  CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("coarse_cfl"), ConfigError);
}

TEST_CASE("window structure must divide the run") {
  std::string text = baseline;
  text.replace(text.find("n_p = 6"), 7, "n_p = 7");
  CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("N_p = 7"), ConfigError);
}

TEST_CASE("missing keys are listed") {
  try {
    parse_config("");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const auto& key : required_config_keys()) CHECK(msg.find(key) != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(parse_config("model = advection\n"), doctest::Contains("missing required keys: nx"),
                       ConfigError);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_WITH_AS(parse_config(baseline + "colour = red\n"), doctest::Contains("unknown key 'colour'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(baseline + "nx = 20\n"), doctest::Contains("duplicate key 'nx'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(baseline + "just words\n"), doctest::Contains("line 10"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(baseline + "sound_speed = fast\n"), doctest::Contains("sound_speed"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(baseline + "workers = 2.5\n"), doctest::Contains("workers"), ConfigError);
  CHECK_THROWS_AS(parse_config(baseline + "coarse_flux_order = 7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(baseline + "coarse_scheme = leapfrog\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(baseline + "velocity = swirl\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(baseline + "probe_x = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(baseline + "rank_tolerance = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(baseline + "workers = 0\n"), ConfigError);
  std::string bad_model = baseline;
  bad_model.replace(bad_model.find("acoustic_advection"), 18, "shallow_water");
  CHECK_THROWS_WITH_AS(parse_config(bad_model), doctest::Contains("model"), ConfigError);
}

TEST_CASE("optional keys") {
  const ExperimentConfig cfg =
      parse_config(baseline + "tolerance = 1e-8\ncost_ratio = 1.165\nworkers = 3\nsnapshot_every = 5\n");
  REQUIRE(cfg.tolerance.has_value());
  CHECK(*cfg.tolerance == 1e-8);
  CHECK(*cfg.cost_ratio == 1.165);
  CHECK(cfg.workers == 3);
  CHECK(cfg.snapshot_every == 5);
}

TEST_CASE("worker count from the environment") {
  ::unsetenv("PIT_WORKERS");
  CHECK_FALSE(workers_from_environment().has_value());
  ::setenv("PIT_WORKERS", "4", 1);
  CHECK(workers_from_environment() == 4);
  ::setenv("PIT_WORKERS", "0", 1);
  CHECK_THROWS_AS(workers_from_environment(), ConfigError);
  ::setenv("PIT_WORKERS", "4x", 1);
  CHECK_THROWS_AS(workers_from_environment(), ConfigError);
  ::unsetenv("PIT_WORKERS");
}
