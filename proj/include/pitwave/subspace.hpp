#pragma once

#include "pitwave/integrators.hpp"

#include <Eigen/Core>

#include <span>

namespace pitwave {

/// Span of the states fed to the fine propagator so far, together with the
/// fine propagator's images of an orthonormal basis of that span.
///
/// Every update re-factorises the complete snapshot matrix with a
/// column-pivoted Householder QR. Columns are normalised before the
/// factorisation and the basis is truncated where the triangular diagonal
/// falls to rank_tolerance times its leading entry. Images of the basis are
/// formed from the stored snapshot images with the same linear combinations
/// that express the basis in terms of the snapshots, which relies on the fine
/// propagator being linear and autonomous.
class Subspace {
public:
  explicit Subspace(Eigen::Index dimension, double rank_tolerance = 1e-10);

  Eigen::Index dimension() const { return dimension_; }
  Eigen::Index rank() const { return basis_.cols(); }
  Eigen::Index snapshot_count() const { return snapshots_.cols(); }
  bool empty() const { return rank() == 0; }
  double rank_tolerance() const { return rank_tolerance_; }

  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::MatrixXd& images() const { return images_; }

  /// Appends snapshots and their fine images, then rebuilds basis and images.
  void update(std::span<const Eigen::VectorXd> states, std::span<const Eigen::VectorXd> images);

  void reset();

  /// Q (Q^T q).
  Eigen::VectorXd project(const Eigen::VectorXd& q) const;

  /// FQ (Q^T q): the fine propagation of the projection of q, without
  /// running the fine propagator.
  Eigen::VectorXd fine_on_projection(const Eigen::VectorXd& q) const;

private:
  void check_dimension(const Eigen::VectorXd& q) const;
  void refactor();

  Eigen::Index dimension_;
  double rank_tolerance_;
  Eigen::MatrixXd snapshots_;
  Eigen::MatrixXd snapshot_images_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd images_;
};

Subspace update_subspace(Subspace sub, std::span<const Eigen::VectorXd> states,
                         std::span<const Eigen::VectorXd> images);

/// Enhanced coarse propagator G((I - P) q) + F(P q) over [t0, t1], where t1 - t0
/// must equal the interval the stored images were computed for.
Eigen::VectorXd kse_coarse(const Subspace& sub, const Propagator& coarse,
                           const Eigen::VectorXd& q, double t0, double t1);

} // namespace pitwave
