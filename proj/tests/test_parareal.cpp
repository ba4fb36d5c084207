#include "pitwave/parareal.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace pitwave;
using testing_support::MatrixPropagator;
using testing_support::random_matrix;
using testing_support::random_vector;
using testing_support::rel_diff;

namespace {

PararealOptions options(int n, int iterations) {
  PararealOptions o;
  o.n_intervals = n;
  o.n_iterations = iterations;
  return o;
}

std::vector<Eigen::VectorXd> sequential(const Eigen::MatrixXd& f, const Eigen::VectorXd& q0, int n) {
  std::vector<Eigen::VectorXd> out{q0};
  for (int i = 0; i < n; ++i) out.push_back(f * out.back());
  return out;
}

// Dense restatement of the enhanced iteration with an explicit projector.
std::vector<Eigen::VectorXd> dense_kse(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g,
                                       const Eigen::VectorXd& q0, int n, int iterations) {
  const Eigen::Index d = q0.size();
  std::vector<Eigen::VectorXd> q{q0};
  for (int i = 0; i < n; ++i) q.push_back(g * q.back());
  Eigen::MatrixXd snapshots(d, 0);
  for (int k = 0; k < iterations; ++k) {
    std::vector<Eigen::VectorXd> pred(n + 1);
    for (int i = 0; i < n; ++i) pred[i + 1] = f * q[i];
    const Eigen::Index old = snapshots.cols();
    snapshots.conservativeResize(d, old + n);
    for (int i = 0; i < n; ++i) snapshots.col(old + i) = q[i];
    const Eigen::MatrixXd pinv = snapshots.completeOrthogonalDecomposition().pseudoInverse();
    const Eigen::MatrixXd p = snapshots * pinv;
    const Eigen::MatrixXd k_op = g * (Eigen::MatrixXd::Identity(d, d) - p) + f * p;
    std::vector<Eigen::VectorXd> next{q0};
    for (int i = 0; i < n; ++i) next.push_back(k_op * next[i] + pred[i + 1] - k_op * q[i]);
    q = next;
  }
  return q;
}

} // namespace

TEST_CASE("iteration residual") {
  const std::vector<Eigen::VectorXd> a{Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0, 0, 0)};
  CHECK(iteration_residual(a, a) == 0.0);
  std::vector<Eigen::VectorXd> b = a;
  b[1][2] += 1.0;
  CHECK(iteration_residual(a, b) == 1.0);
  CHECK_THROWS_AS(iteration_residual(a, std::vector<Eigen::VectorXd>{a[0]}), std::invalid_argument);

  std::mt19937_64 rng(3);
  std::vector<Eigen::VectorXd> x, y;
  double expected = 0.0;
  for (int i = 0; i < 7; ++i) {
    x.push_back(random_vector(rng, 5));
    y.push_back(random_vector(rng, 5));
    expected = std::max(expected, (x.back() - y.back()).norm());
  }
  CHECK(iteration_residual(x, y) == expected);
}

TEST_CASE("Dahlquist example with exact fine and forward Euler coarse") {
  const MatrixPropagator fine(Eigen::MatrixXd::Constant(1, 1, std::exp(-0.5)), 0.5);
  const MatrixPropagator coarse(Eigen::MatrixXd::Constant(1, 1, 0.5), 0.5);
  const Eigen::VectorXd q0 = Eigen::VectorXd::Ones(1);

  const WindowResult init = parareal_window(fine, coarse, options(2, 0), q0, 0.0, 0.5);
  CHECK(init.endpoints[1][0] == doctest::Approx(0.5));
  CHECK(init.endpoints[2][0] == doctest::Approx(0.25));
  CHECK(init.residuals.empty());

  const WindowResult one = parareal_window(fine, coarse, options(2, 1), q0, 0.0, 0.5);
  CHECK(one.endpoints[1][0] == doctest::Approx(0.60653).epsilon(1e-5));
  CHECK(one.endpoints[2][0] == doctest::Approx(0.35653).epsilon(1e-5));
  CHECK(one.endpoints[2][0] ==
        doctest::Approx(0.5 * std::exp(-0.5) + 0.5 * std::exp(-0.5) - 0.25).epsilon(1e-14));
  REQUIRE(one.residuals.size() == 1);
  CHECK(one.residuals[0] == doctest::Approx(std::exp(-0.5) - 0.5));
}

TEST_CASE("both iterations are exact after N_c iterations") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const Eigen::Index d = 10;
    const Eigen::MatrixXd f = random_matrix(rng, d, d) / 3.0;
    const Eigen::MatrixXd g = random_matrix(rng, d, d) / 3.0;
    const MatrixPropagator fine(f, 0.1), coarse(g, 0.1);
    const Eigen::VectorXd q0 = random_vector(rng, d);
    const auto exact = sequential(f, q0, n);
    const WindowResult a = parareal_window(fine, coarse, options(n, n), q0, 0.0, 0.1);
    const WindowResult b = kse_parareal_window(fine, coarse, options(n, n), q0, 0.0, 0.1);
    for (int i = 0; i <= n; ++i) {
      CHECK(rel_diff(a.endpoints[i], exact[i]) < 1e-12);
      CHECK(rel_diff(b.endpoints[i], exact[i]) < 1e-12);
    }
    CHECK(a.residuals.size() == static_cast<std::size_t>(n));
    CHECK(b.subspace_ranks.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("a coarse propagator equal to the fine one converges in one iteration") {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd f = random_matrix(rng, 6, 6) / 3.0;
  const MatrixPropagator fine(f, 1.0);
  const Eigen::VectorXd q0 = random_vector(rng, 6);
  const WindowResult r = parareal_window(fine, fine, options(5, 1), q0, 0.0, 1.0);
  const auto exact = sequential(f, q0, 5);
  for (int i = 0; i <= 5; ++i) CHECK(rel_diff(r.endpoints[i], exact[i]) < 1e-14);
}

TEST_CASE("enhanced iteration matches a dense oracle on a 2x2 system") {
  Eigen::Matrix2d f, g;
  f << 0.9, 0.3, -0.3, 0.9;
  g << 1.0, 0.2, -0.2, 1.0;
  const MatrixPropagator fine(f, 0.25), coarse(g, 0.25);
  const Eigen::VectorXd q0 = Eigen::Vector2d(1.0, 0.5);
  for (int iterations = 1; iterations <= 3; ++iterations) {
    const WindowResult r = kse_parareal_window(fine, coarse, options(3, iterations), q0, 0.0, 0.25);
    const auto oracle = dense_kse(f, g, q0, 3, iterations);
    for (int i = 0; i <= 3; ++i) CHECK(rel_diff(r.endpoints[i], oracle[i]) < 1e-12);
  }
}

TEST_CASE("enhanced iteration matches the dense oracle on random systems") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index d = 6 + trial;
    const int n = 3 + trial % 3;
    const int iterations = 1 + trial % 3;
    const Eigen::MatrixXd f = random_matrix(rng, d, d) / std::sqrt(double(d));
    const Eigen::MatrixXd g = random_matrix(rng, d, d) / std::sqrt(double(d));
    const MatrixPropagator fine(f, 1.0), coarse(g, 1.0);
    const Eigen::VectorXd q0 = random_vector(rng, d);
    const WindowResult r = kse_parareal_window(fine, coarse, options(n, iterations), q0, 0.0, 1.0);
    const auto oracle = dense_kse(f, g, q0, n, iterations);
    for (int i = 0; i <= n; ++i) CHECK(rel_diff(r.endpoints[i], oracle[i]) < 1e-12);
  }
}

TEST_CASE("enhanced iteration converges once the subspace stops growing") {
  // F and G share the invariant subspace of the first three coordinates.
  std::mt19937_64 rng(12);
  const Eigen::Index d = 10;
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(d, d), g = Eigen::MatrixXd::Zero(d, d);
  f.topLeftCorner(3, 3) = random_matrix(rng, 3, 3) / 2.0;
  f.bottomRightCorner(7, 7) = random_matrix(rng, 7, 7) / 3.0;
  g.topLeftCorner(3, 3) = random_matrix(rng, 3, 3) / 2.0;
  g.bottomRightCorner(7, 7) = random_matrix(rng, 7, 7) / 3.0;
  Eigen::VectorXd q0 = Eigen::VectorXd::Zero(d);
  q0.head(3) = random_vector(rng, 3);
  const MatrixPropagator fine(f, 1.0), coarse(g, 1.0);
  const WindowResult r = kse_parareal_window(fine, coarse, options(6, 3), q0, 0.0, 1.0);
  REQUIRE(r.subspace_ranks.size() == 3);
  CHECK(r.subspace_ranks[0] == 3);
  CHECK(r.subspace_ranks[1] == 3);
  CHECK(r.residuals[0] > 1e-3);
  CHECK(r.residuals[1] < 1e-12);
  REQUIRE(r.subspace.has_value());
  CHECK(r.subspace->rank() == 3);
}

TEST_CASE("residual tolerance stops the iteration early") {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd f = random_matrix(rng, 4, 4) / 3.0;
  const MatrixPropagator fine(f, 1.0);
  PararealOptions o = options(3, 10);
  o.tolerance = 1e-10;
  const Eigen::VectorXd q0 = random_vector(rng, 4);
  const WindowResult r = kse_parareal_window(fine, fine, o, q0, 0.0, 1.0);
  CHECK(r.residuals.size() < 10);
  CHECK(r.residuals.back() < 1e-10);
}

TEST_CASE("the enhanced iteration rejects time-dependent propagators") {
  const testing_support::TimeDependentPropagator td;
  const MatrixPropagator m(Eigen::MatrixXd::Identity(2, 2), 1.0);
  const Eigen::VectorXd q0 = Eigen::Vector2d(1, 1);
  CHECK_THROWS_AS(kse_parareal_window(td, m, options(2, 1), q0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kse_parareal_window(m, td, options(2, 1), q0, 0.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(parareal_window(td, m, options(2, 1), q0, 0.0, 1.0));
}

TEST_CASE("option validation") {
  const MatrixPropagator m(Eigen::MatrixXd::Identity(2, 2), 1.0);
  const Eigen::VectorXd q0 = Eigen::Vector2d(1, 1);
  CHECK_THROWS_AS(parareal_window(m, m, options(0, 1), q0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(parareal_window(m, m, options(2, -1), q0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(parareal_window(m, m, options(2, 1), q0, 0.0, 0.0), std::invalid_argument);
  PararealOptions o = options(2, 1);
  o.workers = 0;
  CHECK_THROWS_AS(parareal_window(m, m, o, q0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("window count") {
  CHECK(window_count(2.0, 1.0 / 300.0, 6) == 100);
  CHECK(window_count(2.0, 1.0 / 600.0, 6) == 200);
  CHECK_THROWS_WITH_AS(window_count(1.0, 0.015, 6), doctest::Contains("not an integer multiple"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(window_count(1.0, 0.1, 6), doctest::Contains("M_c = 10"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(window_count(1.0, 0.1, 6), doctest::Contains("N_p = 6"),
                       std::invalid_argument);
}

TEST_CASE("windowed runs reproduce the sequential fine trajectory when converged") {
  std::mt19937_64 rng(14);
  const Eigen::MatrixXd f = random_matrix(rng, 8, 8) / 3.0;
  const Eigen::MatrixXd g = random_matrix(rng, 8, 8) / 3.0;
  const MatrixPropagator fine(f, 0.5), coarse(g, 0.5);
  const Eigen::VectorXd q0 = random_vector(rng, 8);
  PitConfig cfg;
  cfg.n_processors = 3;
  cfg.n_iterations = 3;
  cfg.coarse_step = 0.5;
  const auto exact = sequential(f, q0, 12);
  for (PitMode mode : {PitMode::original, PitMode::kse}) {
    cfg.mode = mode;
    int calls = 0;
    const RunReport r = run_windowed(fine, coarse, cfg, q0, 6.0, [&](int w, double t, const WindowResult& res) {
      ++calls;
      CHECK(t == doctest::Approx(1.5 * w));
      CHECK(res.endpoints.size() == 4);
      return true;
    });
    CHECK(calls == 4);
    CHECK(r.completed);
    REQUIRE(r.window_states.size() == 5);
    for (int w = 0; w <= 4; ++w) CHECK(rel_diff(r.window_states[w], exact[3 * w]) < 1e-10);
    CHECK(r.residuals.size() == 4);
    CHECK(r.times.coarse >= 0.0);
    CHECK(r.times.fine >= 0.0);
    CHECK(r.times.fine_calls == 4 * 3 * 3);
  }
  const RunReport seq = run_sequential(fine, cfg, q0, 6.0);
  for (int w = 0; w <= 4; ++w) CHECK(rel_diff(seq.window_states[w], exact[3 * w]) < 1e-14);
}

TEST_CASE("observer can stop a run") {
  const MatrixPropagator m(Eigen::MatrixXd::Identity(2, 2), 1.0);
  PitConfig cfg;
  cfg.n_processors = 2;
  cfg.coarse_step = 1.0;
  const RunReport r = run_windowed(m, m, cfg, Eigen::Vector2d(1, 0), 8.0,
                                   [](int w, double, const WindowResult&) { return w < 2; });
  CHECK_FALSE(r.completed);
  CHECK(r.window_states.size() == 3);
  const RunReport s = run_sequential(m, cfg, Eigen::Vector2d(1, 0), 8.0,
                                     [](int w, double, const WindowResult&) { return w < 3; });
  CHECK_FALSE(s.completed);
  CHECK(s.window_states.size() == 4);
}

TEST_CASE("worker count does not change results") {
  const Grid2D grid(16, 16, 1.0, 1.0);
  PropagatorSpec fs;
  fs.model.kind = ModelKind::acoustic_advection;
  fs.model.nu = 0.005;
  fs.cfl = 0.2;
  PropagatorSpec cs = fs;
  cs.scheme = Scheme::split_fe_fb;
  cs.model.nu = 0.1;
  cs.model.advective_order = FluxOrder(1);
  cs.cfl = 2.0;
  cs.n_sound = 4;
  const SchemePropagator fine(grid, fs), coarse(grid, cs);
  Eigen::VectorXd q0 = Eigen::VectorXd::Zero(3 * grid.cells());
  q0.head(grid.cells()) = init_cosine_bump(grid, 0.5, 0.65);
  PitConfig cfg;
  cfg.n_processors = 4;
  cfg.n_iterations = 2;
  cfg.coarse_step = step_size(cs, grid);
  for (PitMode mode : {PitMode::original, PitMode::kse}) {
    cfg.mode = mode;
    cfg.workers = 1;
    const RunReport one = run_windowed(fine, coarse, cfg, q0, 8 * cfg.coarse_step);
    cfg.workers = 4;
    const RunReport four = run_windowed(fine, coarse, cfg, q0, 8 * cfg.coarse_step);
    for (std::size_t w = 0; w < one.window_states.size(); ++w) {
      CHECK(one.window_states[w] == four.window_states[w]);
    }
    CHECK(one.residuals == four.residuals);
  }
}
