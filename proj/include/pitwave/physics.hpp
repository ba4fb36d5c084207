#pragma once

#include "pitwave/mesh.hpp"
#include "pitwave/stencils.hpp"

#include <Eigen/Core>

#include <utility>

namespace pitwave {

enum class ModelKind { advection, acoustic_advection };

/// Physical model and its spatial discretisation. Acoustic terms always use
/// second-order centred differences; `advective_order` applies to the
/// transport of every prognostic field.
struct ModelSpec {
  ModelKind kind = ModelKind::acoustic_advection;
  double sound_speed = 30.0;
  AdvectingVelocity velocity = SolidBodyRotation{};
  FluxOrder advective_order{6};
  /// Dimensionless divergence-damping strength.
  double nu = 0.0;
  /// Damping time scale; the time step over which damping is applied.
  double tau = 1.0;

  void validate() const;
};

StateKind state_kind(ModelKind kind);

/// (nu dx^2 / tau, nu dy^2 / tau).
std::pair<double, double> damping_coefficients(double nu, double dx, double dy, double tau);

/// Semi-discrete right-hand side of one model on one grid, with interface
/// velocities and damping coefficients precomputed. Stateless after
/// construction; concurrent calls on distinct vectors are safe.
class ModelOperator {
public:
  ModelOperator(const Grid2D& grid, const ModelSpec& spec);

  const Grid2D& grid() const { return advection_.grid(); }
  const ModelSpec& spec() const { return spec_; }
  StateKind state_kind() const { return pitwave::state_kind(spec_.kind); }
  int dimension() const { return state_dimension(state_kind(), grid()); }
  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }

  /// out = f(q), the complete tendency.
  void rhs(const Eigen::VectorXd& q, Eigen::VectorXd& out) const;

  /// out = advective (slow) tendency of every field.
  void advective_tendency(const Eigen::VectorXd& q, Eigen::VectorXd& out) const;

  /// Fast momentum tendency -c_s grad(pi) + damping, written to the u and v
  /// blocks of out (the pi block is left untouched). Acoustic model only.
  void fast_momentum(const Eigen::VectorXd& q, Eigen::VectorXd& out) const;

  /// Fast pressure tendency -c_s (u_x + v_y), written to the pi block of out.
  void fast_pressure(const Eigen::VectorXd& q, Eigen::VectorXd& out) const;

private:
  ModelSpec spec_;
  AdvectionOperator advection_;
  double alpha1_ = 0.0;
  double alpha2_ = 0.0;
};

State advection_rhs(const State& state, const ModelSpec& spec, const Grid2D& grid);
State acoustic_advection_rhs(const State& state, const ModelSpec& spec, const Grid2D& grid);

} // namespace pitwave
