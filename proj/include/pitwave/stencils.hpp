#pragma once

#include "pitwave/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace pitwave {

/// Order of the advective interface flux, 1..6. Odd orders are upwind-biased,
/// even orders centred.
class FluxOrder {
public:
  explicit FluxOrder(int order);
  int value() const { return order_; }
  bool upwind() const { return order_ % 2 == 1; }
  bool operator==(const FluxOrder&) const = default;

private:
  int order_;
};

namespace detail {

// w points at q_{i-2}; the interface lies between w[2] and w[3].
template <int Order>
inline double interface_flux(double u, const double* w) {
  if constexpr (Order == 1) {
    return u >= 0.0 ? u * w[2] : u * w[3];
  } else if constexpr (Order == 2) {
    return u * 0.5 * (w[2] + w[3]);
  } else if constexpr (Order == 4) {
    return u * (7.0 * (w[2] + w[3]) - (w[1] + w[4])) / 12.0;
  } else if constexpr (Order == 6) {
    return u * (37.0 * (w[2] + w[3]) - 8.0 * (w[1] + w[4]) + (w[0] + w[5])) / 60.0;
  } else if constexpr (Order == 3) {
    return interface_flux<4>(u, w) -
           std::abs(u) * (3.0 * (w[3] - w[2]) - (w[4] - w[1])) / 12.0;
  } else {
    static_assert(Order == 5);
    return interface_flux<6>(u, w) -
           std::abs(u) * (10.0 * (w[3] - w[2]) - 5.0 * (w[4] - w[1]) + (w[5] - w[0])) / 60.0;
  }
}

} // namespace detail

/// Advective flux through the interface between cells i and i+1, given the
/// normal velocity there and the window q_{i-2}, ..., q_{i+3}.
double advective_interface_flux(FluxOrder order, double u_face, std::span<const double, 6> window);

/// Conservation-form tendency -(F_{i+1/2} - F_{i-1/2})/dx - (G_{j+1/2} - G_{j-1/2})/dy.
/// fx[index(i, j)] holds F_{i+1/2, j}; gy[index(i, j)] holds G_{i, j+1/2}.
Eigen::VectorXd flux_divergence(std::span<const double> fx, std::span<const double> gy,
                                const Grid2D& grid);

/// Second-order centred first derivative with periodic wrap.
Eigen::VectorXd centered_derivative(std::span<const double> f, Axis axis, const Grid2D& grid);

/// out = scale * d/d(axis) f, written into out (no aliasing with f).
void centered_derivative_into(std::span<const double> f, Axis axis, const Grid2D& grid,
                              double scale, std::span<double> out, bool accumulate);

struct DampingTendency {
  Eigen::VectorXd du;
  Eigen::VectorXd dv;
};

/// (alpha1 d/dx D, alpha2 d/dy D) with D the centred divergence of (u, v).
DampingTendency divergence_damping(std::span<const double> u, std::span<const double> v,
                                   const Grid2D& grid, double alpha1, double alpha2);

/// Flux-form advection operator with interface velocities cached for one
/// grid. Evaluates -div(U q) for a single cell-centred field.
class AdvectionOperator {
public:
  AdvectionOperator(const Grid2D& grid, const AdvectingVelocity& velocity, FluxOrder order);

  const Grid2D& grid() const { return grid_; }
  FluxOrder order() const { return order_; }

  /// out (+)= -div(U q).
  void apply(std::span<const double> q, std::span<double> out, bool accumulate = false) const;

  /// Interface fluxes F_{i+1/2,j} and G_{i,j+1/2}.
  void fluxes(std::span<const double> q, std::span<double> fx, std::span<double> gy) const;

private:
  template <int Order>
  void fluxes_impl(std::span<const double> q, std::span<double> fx, std::span<double> gy) const;

  Grid2D grid_;
  FluxOrder order_;
  std::vector<double> ux_; // normal velocity on x-faces
  std::vector<double> vy_; // normal velocity on y-faces
};

} // namespace pitwave
