#pragma once

// Reference computations used as test oracles. They deliberately avoid the
// library code paths they check: plain loops and Eigen decompositions only.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gae/tensor.hpp"

namespace gae::testing {

/// Central differences of f with respect to every coordinate of a leaf.
inline std::vector<double> numeric_gradient(const std::function<double()>& f, Tensor& leaf, double h = 1e-6) {
  std::vector<double> g(leaf.size());
  auto values = leaf.mutable_values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double saved = values[i];
    values[i] = saved + h;
    const double up = f();
    values[i] = saved - h;
    const double down = f();
    values[i] = saved;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double relative_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / (std::abs(a) + std::abs(b) + floor);
}

inline Eigen::MatrixXd as_matrix(const Tensor& t) {
  Eigen::MatrixXd m(t.rows(), t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) m(i, j) = t.at(i, j);
  return m;
}

/// Solves Sigma = M Sigma M^T + Q through the Kronecker form
/// (I - M (x) M) vec(Sigma) = vec(Q).
inline Eigen::MatrixXd kronecker_lyapunov(const Eigen::MatrixXd& M, const Eigen::MatrixXd& Q) {
  const Eigen::Index b = M.rows();
  Eigen::MatrixXd K(b * b, b * b);
  for (Eigen::Index i = 0; i < b; ++i)
    for (Eigen::Index j = 0; j < b; ++j) K.block(i * b, j * b, b, b) = M(i, j) * M;
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(b * b, b * b) - K;
  const Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(Q.data(), b * b);
  const Eigen::VectorXd s = A.fullPivLu().solve(q);
  return Eigen::Map<const Eigen::MatrixXd>(s.data(), b, b);
}

/// Squared-MMD V-statistic with an RBF kernel, written out term by term.
inline double naive_mmd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double h) {
  auto k = [h](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return std::exp(-(x - y).squaredNorm() / (2.0 * h * h));
  };
  double kaa = 0, kbb = 0, kab = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.rows(); ++j) kaa += k(a.row(i), a.row(j));
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) kbb += k(b.row(i), b.row(j));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) kab += k(a.row(i), b.row(j));
  const double na = static_cast<double>(a.rows()), nb = static_cast<double>(b.rows());
  return kaa / (na * na) + kbb / (nb * nb) - 2.0 * kab / (na * nb);
}

/// Median of all pairwise distances of the pooled rows, by sorting.
inline double naive_median_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd all(a.rows() + b.rows(), a.cols());
  all << a, b;
  std::vector<double> d;
  for (Eigen::Index i = 0; i < all.rows(); ++i)
    for (Eigen::Index j = i + 1; j < all.rows(); ++j) d.push_back((all.row(i) - all.row(j)).norm());
  std::sort(d.begin(), d.end());
  const std::size_t n = d.size();
  return n % 2 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
}

}  // namespace gae::testing
