#pragma once

#include "pitwave/integrators.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <span>

namespace testing_support {

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(rows, cols);
  for (auto& x : m.reshaped()) x = dist(rng);
  return m;
}

inline std::span<const double> sp(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline std::span<double> sp(Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

inline double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double ref = b.norm();
  return ref == 0.0 ? a.norm() : (a - b).norm() / ref;
}

// Propagator applying a fixed matrix once per interval of length `interval`.
class MatrixPropagator final : public pitwave::Propagator {
public:
  MatrixPropagator(Eigen::MatrixXd m, double interval) : m_(std::move(m)), interval_(interval) {}

  Eigen::VectorXd advance(const Eigen::VectorXd& q, double t0, double t1) const override {
    const long n = std::lround((t1 - t0) / interval_);
    Eigen::VectorXd out = q;
    for (long i = 0; i < n; ++i) out = m_ * out;
    return out;
  }

  const Eigen::MatrixXd& matrix() const { return m_; }

private:
  Eigen::MatrixXd m_;
  double interval_;
};

// Propagator whose action depends on the start time.
class TimeDependentPropagator final : public pitwave::Propagator {
public:
  Eigen::VectorXd advance(const Eigen::VectorXd& q, double t0, double) const override {
    return (1.0 + t0) * q;
  }
  bool linear_autonomous() const override { return false; }
};

} // namespace testing_support
