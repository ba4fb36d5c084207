#pragma once

#include "pitwave/mesh.hpp"
#include "pitwave/physics.hpp"

#include <Eigen/Core>

#include <string_view>

namespace pitwave {

/// rk3: non-split three-stage Runge-Kutta on the full tendency.
/// split_fe_fb: forward Euler on the advective tendency, frozen over the step,
///   with forward-backward acoustic substeps.
/// split_rk3_fb: three-stage Runge-Kutta on the advective tendency, each stage
///   integrating the acoustic terms from the step start with forward-backward
///   substeps.
enum class Scheme { rk3, split_fe_fb, split_rk3_fb };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme scheme);

struct PropagatorSpec {
  Scheme scheme = Scheme::rk3;
  ModelSpec model;
  /// Courant number with respect to the fastest wave speed.
  double cfl = 0.2;
  /// Acoustic substeps per step, split schemes only.
  int n_sound = 1;

  void validate() const;
};

/// Reference speed entering the Courant number: the sound speed for the
/// acoustic model, the largest velocity component for pure advection.
double reference_speed(const ModelSpec& model, const Grid2D& grid);

/// Step size cfl * min(dx, dy) / reference_speed.
double step_size(const PropagatorSpec& spec, const Grid2D& grid);

/// Number of steps of size h covering [t0, t1]; throws unless that number
/// is an integer to within 1e-9 relative.
long step_count(double t0, double t1, double h);

/// Advances a state from t0 to t1. All propagators in this library are linear
/// in the state and autonomous in time.
class Propagator {
public:
  virtual ~Propagator() = default;
  virtual Eigen::VectorXd advance(const Eigen::VectorXd& q, double t0, double t1) const = 0;
  /// Whether advance(q, t0, t1) is linear in q and depends on t0, t1 only
  /// through t1 - t0.
  virtual bool linear_autonomous() const { return true; }
};

/// Fixed-step time integrator for one of the model systems.
class SchemePropagator final : public Propagator {
public:
  SchemePropagator(const Grid2D& grid, const PropagatorSpec& spec);
  /// Uses the given step size instead of the one implied by the CFL number.
  SchemePropagator(const Grid2D& grid, const PropagatorSpec& spec, double step);

  Eigen::VectorXd advance(const Eigen::VectorXd& q, double t0, double t1) const override;

  /// One step of size h (split schemes: h is the large step).
  void step(Eigen::VectorXd& q, double h) const;

  double step_size() const { return h_; }
  const PropagatorSpec& spec() const { return spec_; }
  const ModelOperator& model() const { return op_; }

private:
  void rk3(Eigen::VectorXd& q, double h) const;
  void split_fe_fb(Eigen::VectorXd& q, double h) const;
  void split_rk3_fb(Eigen::VectorXd& q, double h) const;
  void forward_backward(Eigen::VectorXd& q, const Eigen::VectorXd& slow, double tau,
                        int substeps) const;

  PropagatorSpec spec_;
  double h_;
  ModelOperator op_;
};

/// Three-stage Runge-Kutta update q <- q + h f(q + h/2 f(q + h/3 f(q))).
/// f(x, out) writes the tendency at x into out.
template <class Rhs>
void rk3_update(const Rhs& f, Eigen::VectorXd& q, double h) {
  Eigen::VectorXd k(q.size());
  Eigen::VectorXd s(q.size());
  f(q, k);
  s = q + (h / 3.0) * k;
  f(s, k);
  s = q + (h / 2.0) * k;
  f(s, k);
  q += h * k;
}

State rk3_step(const State& state, const PropagatorSpec& spec, const Grid2D& grid, double h);
State split_fe_fb_step(const State& state, const PropagatorSpec& spec, const Grid2D& grid,
                       double big_step);
State split_rk3_fb_step(const State& state, const PropagatorSpec& spec, const Grid2D& grid,
                        double big_step);

State propagate(const PropagatorSpec& spec, const Grid2D& grid, const State& state, double t0,
                double t1);

/// Acoustic substeps used by one split Runge-Kutta stage covering the given
/// fraction of the large step: ceil(n_sound * fraction), at least one.
int stage_substeps(int n_sound, double fraction);

} // namespace pitwave
