#pragma once

#include "pitwave/mesh.hpp"

#include <Eigen/Core>

#include <span>
#include <string_view>
#include <vector>

namespace pitwave {

/// omega = u_y - v_x with second-order centred differences.
Eigen::VectorXd vorticity(std::span<const double> u, std::span<const double> v, const Grid2D& grid);

/// Sum over cells of (u^2 + v^2 + pi^2) dx dy. For a scalar state the sum of q^2 dx dy.
double total_energy(const State& state, const Grid2D& grid);

/// ||q_par - q_seq||_2 / ||q_seq||_2 over every component.
double relative_l2_error(const Eigen::VectorXd& q_par, const Eigen::VectorXd& q_seq);

double max_norm(const Eigen::VectorXd& q);

/// Value of field `variable` (0 = q or u, 1 = v, 2 = pi) in the cell whose
/// center is nearest to (x, y).
double sample_probe(const State& state, const Grid2D& grid, double x, double y, int variable);

/// Field index for a variable name: q, u, v or pi.
int variable_index(StateKind kind, std::string_view name);

struct ProbeSeries {
  double x = 0.0;
  double y = 0.0;
  int variable = 0;
  std::vector<double> times;
  std::vector<double> values;

  /// Appends a sample; times must be strictly increasing.
  void record(double t, double value);
};

} // namespace pitwave
