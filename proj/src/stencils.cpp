#include "pitwave/stencils.hpp"

#include <stdexcept>
#include <string>

namespace pitwave {

FluxOrder::FluxOrder(int order) : order_(order) {
  if (order < 1 || order > 6) {
    throw std::invalid_argument("invalid flux order " + std::to_string(order) +
                                " (expected 1..6)");
  }
}

double advective_interface_flux(FluxOrder order, double u_face, std::span<const double, 6> window) {
  const double* w = window.data();
  switch (order.value()) {
  case 1: return detail::interface_flux<1>(u_face, w);
  case 2: return detail::interface_flux<2>(u_face, w);
  case 3: return detail::interface_flux<3>(u_face, w);
  case 4: return detail::interface_flux<4>(u_face, w);
  case 5: return detail::interface_flux<5>(u_face, w);
  default: return detail::interface_flux<6>(u_face, w);
  }
}

Eigen::VectorXd flux_divergence(std::span<const double> fx, std::span<const double> gy,
                                const Grid2D& grid) {
  const auto n = static_cast<std::size_t>(grid.cells());
  if (fx.size() != n || gy.size() != n) {
    throw std::invalid_argument("flux array shape mismatch: expected " + std::to_string(n) +
                                " faces per direction");
  }
  const double rdx = 1.0 / grid.dx();
  const double rdy = 1.0 / grid.dy();
  Eigen::VectorXd tend(grid.cells());
  for (int j = 0; j < grid.ny(); ++j) {
    const int jm = grid.wrap_y(j - 1);
    for (int i = 0; i < grid.nx(); ++i) {
      const int im = grid.wrap_x(i - 1);
      const int c = grid.index(i, j);
      tend[c] = -(fx[c] - fx[grid.index(im, j)]) * rdx - (gy[c] - gy[grid.index(i, jm)]) * rdy;
    }
  }
  return tend;
}

void centered_derivative_into(std::span<const double> f, Axis axis, const Grid2D& grid,
                              double scale, std::span<double> out, bool accumulate) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  if (axis == Axis::x) {
    const double c = scale / (2.0 * grid.dx());
    for (int j = 0; j < ny; ++j) {
      const double* row = f.data() + static_cast<std::size_t>(j) * nx;
      double* o = out.data() + static_cast<std::size_t>(j) * nx;
      for (int i = 0; i < nx; ++i) {
        const int ip = i + 1 == nx ? 0 : i + 1;
        const int im = i == 0 ? nx - 1 : i - 1;
        const double d = c * (row[ip] - row[im]);
        o[i] = accumulate ? o[i] + d : d;
      }
    }
  } else {
    const double c = scale / (2.0 * grid.dy());
    for (int j = 0; j < ny; ++j) {
      const double* up = f.data() + static_cast<std::size_t>(j + 1 == ny ? 0 : j + 1) * nx;
      const double* dn = f.data() + static_cast<std::size_t>(j == 0 ? ny - 1 : j - 1) * nx;
      double* o = out.data() + static_cast<std::size_t>(j) * nx;
      for (int i = 0; i < nx; ++i) {
        const double d = c * (up[i] - dn[i]);
        o[i] = accumulate ? o[i] + d : d;
      }
    }
  }
}

Eigen::VectorXd centered_derivative(std::span<const double> f, Axis axis, const Grid2D& grid) {
  if (f.size() != static_cast<std::size_t>(grid.cells())) {
    throw std::invalid_argument("field size does not match grid");
  }
  Eigen::VectorXd out(grid.cells());
  centered_derivative_into(f, axis, grid, 1.0, {out.data(), static_cast<std::size_t>(out.size())},
                           false);
  return out;
}

DampingTendency divergence_damping(std::span<const double> u, std::span<const double> v,
                                   const Grid2D& grid, double alpha1, double alpha2) {
  if (alpha1 < 0.0 || alpha2 < 0.0) {
    throw std::invalid_argument("damping coefficients must be non-negative");
  }
  const auto n = static_cast<std::size_t>(grid.cells());
  Eigen::VectorXd div(grid.cells());
  std::span<double> ds{div.data(), n};
  centered_derivative_into(u, Axis::x, grid, 1.0, ds, false);
  centered_derivative_into(v, Axis::y, grid, 1.0, ds, true);
  DampingTendency out{Eigen::VectorXd(grid.cells()), Eigen::VectorXd(grid.cells())};
  centered_derivative_into(ds, Axis::x, grid, alpha1, {out.du.data(), n}, false);
  centered_derivative_into(ds, Axis::y, grid, alpha2, {out.dv.data(), n}, false);
  return out;
}

AdvectionOperator::AdvectionOperator(const Grid2D& grid, const AdvectingVelocity& velocity,
                                     FluxOrder order)
    : grid_(grid), order_(order), ux_(grid.cells()), vy_(grid.cells()) {
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      ux_[grid.index(i, j)] = velocity_at_interface(velocity, {Axis::x, i, j}, grid);
      vy_[grid.index(i, j)] = velocity_at_interface(velocity, {Axis::y, i, j}, grid);
    }
  }
}

template <int Order>
void AdvectionOperator::fluxes_impl(std::span<const double> q, std::span<double> fx,
                                    std::span<double> gy) const {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  thread_local std::vector<double> pad;
  pad.resize(static_cast<std::size_t>(nx) + 6);

  for (int j = 0; j < ny; ++j) {
    const double* row = q.data() + static_cast<std::size_t>(j) * nx;
    for (int k = 0; k < nx + 6; ++k) {
      pad[k] = row[grid_.wrap_x(k - 3)];
    }
    const double* u = ux_.data() + static_cast<std::size_t>(j) * nx;
    double* f = fx.data() + static_cast<std::size_t>(j) * nx;
    // interface i+1/2 uses q_{i-2..i+3} = pad[i+1..i+6]
    for (int i = 0; i < nx; ++i) {
      f[i] = detail::interface_flux<Order>(u[i], pad.data() + i + 1);
    }
  }

  for (int j = 0; j < ny; ++j) {
    const double* rows[6];
    for (int k = 0; k < 6; ++k) {
      rows[k] = q.data() + static_cast<std::size_t>(grid_.wrap_y(j - 2 + k)) * nx;
    }
    const double* v = vy_.data() + static_cast<std::size_t>(j) * nx;
    double* g = gy.data() + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const double w[6] = {rows[0][i], rows[1][i], rows[2][i], rows[3][i], rows[4][i], rows[5][i]};
      g[i] = detail::interface_flux<Order>(v[i], w);
    }
  }
}

void AdvectionOperator::fluxes(std::span<const double> q, std::span<double> fx,
                               std::span<double> gy) const {
  switch (order_.value()) {
  case 1: fluxes_impl<1>(q, fx, gy); break;
  case 2: fluxes_impl<2>(q, fx, gy); break;
  case 3: fluxes_impl<3>(q, fx, gy); break;
  case 4: fluxes_impl<4>(q, fx, gy); break;
  case 5: fluxes_impl<5>(q, fx, gy); break;
  default: fluxes_impl<6>(q, fx, gy); break;
  }
}

void AdvectionOperator::apply(std::span<const double> q, std::span<double> out,
                              bool accumulate) const {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  const auto n = static_cast<std::size_t>(grid_.cells());
  thread_local std::vector<double> fx;
  thread_local std::vector<double> gy;
  fx.resize(n);
  gy.resize(n);
  fluxes(q, fx, gy);

  const double rdx = 1.0 / grid_.dx();
  const double rdy = 1.0 / grid_.dy();
  for (int j = 0; j < ny; ++j) {
    const std::size_t r = static_cast<std::size_t>(j) * nx;
    const std::size_t rm = static_cast<std::size_t>(j == 0 ? ny - 1 : j - 1) * nx;
    for (int i = 0; i < nx; ++i) {
      const std::size_t im = r + (i == 0 ? nx - 1 : i - 1);
      const double t = -(fx[r + i] - fx[im]) * rdx - (gy[r + i] - gy[rm + i]) * rdy;
      out[r + i] = accumulate ? out[r + i] + t : t;
    }
  }
}

} // namespace pitwave
