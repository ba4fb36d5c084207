#include "pitwave/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pitwave {

Scheme parse_scheme(std::string_view name) {
  if (name == "rk3") return Scheme::rk3;
  if (name == "split_fe_fb") return Scheme::split_fe_fb;
  if (name == "split_rk3_fb") return Scheme::split_rk3_fb;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected rk3, split_fe_fb or split_rk3_fb)");
}

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
  case Scheme::rk3: return "rk3";
  case Scheme::split_fe_fb: return "split_fe_fb";
  case Scheme::split_rk3_fb: return "split_rk3_fb";
  }
  return "?";
}

void PropagatorSpec::validate() const {
  if (!(cfl > 0.0)) {
    throw std::invalid_argument("CFL number must be positive");
  }
  if (n_sound < 1) {
    throw std::invalid_argument("n_sound must be at least 1");
  }
  if (scheme != Scheme::rk3 && model.kind != ModelKind::acoustic_advection) {
    throw std::invalid_argument("split schemes require the acoustic-advection model");
  }
  model.validate();
}

double reference_speed(const ModelSpec& model, const Grid2D& grid) {
  if (model.kind == ModelKind::acoustic_advection) {
    return model.sound_speed;
  }
  const double c = max_velocity_component(model.velocity, grid);
  if (!(c > 0.0)) {
    throw std::invalid_argument("advection velocity vanishes; no reference speed for the CFL number");
  }
  return c;
}

double step_size(const PropagatorSpec& spec, const Grid2D& grid) {
  return spec.cfl * std::min(grid.dx(), grid.dy()) / reference_speed(spec.model, grid);
}

long step_count(double t0, double t1, double h) {
  const double span = t1 - t0;
  if (span < 0.0) {
    throw std::invalid_argument("propagation interval must not be negative");
  }
  const double ratio = span / h;
  const long n = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("interval " + std::to_string(span) +
                                " is not an integer multiple of the step " + std::to_string(h));
  }
  return n;
}

int stage_substeps(int n_sound, double fraction) {
  return std::max(1, static_cast<int>(std::ceil(n_sound * fraction - 1e-12)));
}

namespace {

ModelSpec with_damping_scale(PropagatorSpec spec, double h) {
  spec.validate();
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  spec.model.tau = spec.scheme == Scheme::rk3 ? h : h / spec.n_sound;
  return spec.model;
}

} // namespace

SchemePropagator::SchemePropagator(const Grid2D& grid, const PropagatorSpec& spec)
    : SchemePropagator(grid, spec, pitwave::step_size(spec, grid)) {}

SchemePropagator::SchemePropagator(const Grid2D& grid, const PropagatorSpec& spec, double step)
    : spec_(spec), h_(step), op_(grid, with_damping_scale(spec, step)) {
  spec_.model.tau = op_.spec().tau;
}

Eigen::VectorXd SchemePropagator::advance(const Eigen::VectorXd& q, double t0, double t1) const {
  const long n = step_count(t0, t1, h_);
  Eigen::VectorXd out = q;
  for (long s = 0; s < n; ++s) {
    step(out, h_);
  }
  return out;
}

void SchemePropagator::step(Eigen::VectorXd& q, double h) const {
  switch (spec_.scheme) {
  case Scheme::rk3: rk3(q, h); break;
  case Scheme::split_fe_fb: split_fe_fb(q, h); break;
  case Scheme::split_rk3_fb: split_rk3_fb(q, h); break;
  }
}

void SchemePropagator::rk3(Eigen::VectorXd& q, double h) const {
  rk3_update([this](const Eigen::VectorXd& x, Eigen::VectorXd& out) { op_.rhs(x, out); }, q, h);
}

// Substeps of size tau from q with the slow tendency held fixed: velocities
// first with the current pressure, then pressure from the updated velocities.
void SchemePropagator::forward_backward(Eigen::VectorXd& q, const Eigen::VectorXd& slow,
                                        double tau, int substeps) const {
  const Eigen::Index n = op_.grid().cells();
  thread_local Eigen::VectorXd fast;
  fast.resize(q.size());
  for (int s = 0; s < substeps; ++s) {
    op_.fast_momentum(q, fast);
    q.head(2 * n) += tau * (slow.head(2 * n) + fast.head(2 * n));
    op_.fast_pressure(q, fast);
    q.tail(n) += tau * (slow.tail(n) + fast.tail(n));
  }
}

void SchemePropagator::split_fe_fb(Eigen::VectorXd& q, double h) const {
  thread_local Eigen::VectorXd slow;
  op_.advective_tendency(q, slow);
  forward_backward(q, slow, h / spec_.n_sound, spec_.n_sound);
}

void SchemePropagator::split_rk3_fb(Eigen::VectorXd& q, double h) const {
  thread_local Eigen::VectorXd slow;
  thread_local Eigen::VectorXd stage;
  stage = q;
  for (const double fraction : {1.0 / 3.0, 1.0 / 2.0, 1.0}) {
    op_.advective_tendency(stage, slow);
    const int ns = stage_substeps(spec_.n_sound, fraction);
    stage = q;
    forward_backward(stage, slow, fraction * h / ns, ns);
  }
  q = stage;
}

namespace {

State step_with(const State& state, PropagatorSpec spec, Scheme scheme, const Grid2D& grid,
                double h) {
  spec.scheme = scheme;
  if (state.kind() != state_kind(spec.model.kind)) {
    throw std::invalid_argument("state kind does not match the model");
  }
  SchemePropagator prop(grid, spec, h);
  Eigen::VectorXd q = state.values();
  prop.step(q, h);
  return State(state.kind(), grid, std::move(q));
}

} // namespace

State rk3_step(const State& state, const PropagatorSpec& spec, const Grid2D& grid, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  return step_with(state, spec, Scheme::rk3, grid, h);
}

State split_fe_fb_step(const State& state, const PropagatorSpec& spec, const Grid2D& grid,
                       double big_step) {
  if (!(big_step > 0.0)) throw std::invalid_argument("step size must be positive");
  return step_with(state, spec, Scheme::split_fe_fb, grid, big_step);
}

State split_rk3_fb_step(const State& state, const PropagatorSpec& spec, const Grid2D& grid,
                        double big_step) {
  if (!(big_step > 0.0)) throw std::invalid_argument("step size must be positive");
  return step_with(state, spec, Scheme::split_rk3_fb, grid, big_step);
}

State propagate(const PropagatorSpec& spec, const Grid2D& grid, const State& state, double t0,
                double t1) {
  SchemePropagator prop(grid, spec);
  return State(state.kind(), grid, prop.advance(state.values(), t0, t1));
}

} // namespace pitwave
