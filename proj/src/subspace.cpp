#include "pitwave/subspace.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>
#include <string>

namespace pitwave {

Subspace::Subspace(Eigen::Index dimension, double rank_tolerance)
    : dimension_(dimension), rank_tolerance_(rank_tolerance), snapshots_(dimension, 0),
      snapshot_images_(dimension, 0), basis_(dimension, 0), images_(dimension, 0) {
  if (dimension <= 0) {
    throw std::invalid_argument("subspace dimension must be positive");
  }
  if (!(rank_tolerance > 0.0) || rank_tolerance >= 1.0) {
    throw std::invalid_argument("rank tolerance must lie in (0, 1)");
  }
}

void Subspace::check_dimension(const Eigen::VectorXd& q) const {
  if (q.size() != dimension_) {
    throw std::invalid_argument("dimension mismatch: subspace has " + std::to_string(dimension_) +
                                ", vector has " + std::to_string(q.size()));
  }
}

void Subspace::reset() {
  snapshots_.resize(dimension_, 0);
  snapshot_images_.resize(dimension_, 0);
  basis_.resize(dimension_, 0);
  images_.resize(dimension_, 0);
}

void Subspace::update(std::span<const Eigen::VectorXd> states,
                      std::span<const Eigen::VectorXd> images) {
  if (states.size() != images.size()) {
    throw std::invalid_argument("subspace update needs one image per state (" +
                                std::to_string(states.size()) + " states, " +
                                std::to_string(images.size()) + " images)");
  }
  for (std::size_t k = 0; k < states.size(); ++k) {
    check_dimension(states[k]);
    check_dimension(images[k]);
  }

  Eigen::Index m = snapshots_.cols();
  snapshots_.conservativeResize(Eigen::NoChange, m + static_cast<Eigen::Index>(states.size()));
  snapshot_images_.conservativeResize(Eigen::NoChange, snapshots_.cols());
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double norm = states[k].norm();
    if (norm == 0.0) {
      continue;
    }
    snapshots_.col(m) = states[k] / norm;
    snapshot_images_.col(m) = images[k] / norm;
    ++m;
  }
  snapshots_.conservativeResize(Eigen::NoChange, m);
  snapshot_images_.conservativeResize(Eigen::NoChange, m);
  refactor();
}

void Subspace::refactor() {
  const Eigen::Index m = snapshots_.cols();
  if (m == 0) {
    basis_.resize(dimension_, 0);
    images_.resize(dimension_, 0);
    return;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(snapshots_);
  const auto& packed = qr.matrixQR();
  const Eigen::Index kmax = std::min(dimension_, m);
  const double lead = std::abs(packed(0, 0));
  Eigen::Index r = 0;
  while (r < kmax && std::abs(packed(r, r)) > rank_tolerance_ * lead) {
    ++r;
  }

  basis_ = Eigen::MatrixXd::Identity(dimension_, r);
  basis_.applyOnTheLeft(qr.householderQ());

  // S P = Q R, so the leading r columns give Q_r = (S P)_r R11^{-1} and, by
  // linearity, F(Q_r) = (F(S) P)_r R11^{-1}.
  const Eigen::MatrixXd permuted_images = snapshot_images_ * qr.colsPermutation();
  const Eigen::MatrixXd r11 = packed.topLeftCorner(r, r).triangularView<Eigen::Upper>();
  images_ = r11.transpose()
                .triangularView<Eigen::Lower>()
                .solve(permuted_images.leftCols(r).transpose())
                .transpose();
}

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& q) const {
  check_dimension(q);
  if (empty()) {
    return Eigen::VectorXd::Zero(dimension_);
  }
  return basis_ * (basis_.transpose() * q);
}

Eigen::VectorXd Subspace::fine_on_projection(const Eigen::VectorXd& q) const {
  check_dimension(q);
  if (empty()) {
    return Eigen::VectorXd::Zero(dimension_);
  }
  return images_ * (basis_.transpose() * q);
}

Subspace update_subspace(Subspace sub, std::span<const Eigen::VectorXd> states,
                         std::span<const Eigen::VectorXd> images) {
  sub.update(states, images);
  return sub;
}

Eigen::VectorXd kse_coarse(const Subspace& sub, const Propagator& coarse,
                           const Eigen::VectorXd& q, double t0, double t1) {
  if (sub.empty()) {
    return coarse.advance(q, t0, t1);
  }
  const Eigen::VectorXd alpha = sub.basis().transpose() * q;
  const Eigen::VectorXd residual = q - sub.basis() * alpha;
  Eigen::VectorXd out = coarse.advance(residual, t0, t1);
  out.noalias() += sub.images() * alpha;
  return out;
}

} // namespace pitwave
