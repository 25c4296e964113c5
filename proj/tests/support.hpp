#pragma once

// Shared test helpers: random generators and oracles that do not go
// through the library's own exp/log path.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdint>

#include "lmc/linalg.hpp"
#include "lmc/random.hpp"

namespace lmc::test {

/// Random stochastic rate matrix of order n scaled to Frobenius norm `norm`.
inline SquareMatrix random_rate_matrix(Rng& rng, int n, double norm) {
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = i == j ? 0.0 : rng.uniform();
  q.diagonal() = -q.colwise().sum().transpose();
  return SquareMatrix((norm / q.norm()) * q);
}

inline SquareMatrix random_matrix(Rng& rng, int n, double low = -1.0, double high = 1.0) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(low, high);
  return SquareMatrix(std::move(m));
}

/// Unscaled Taylor series for e^A in long double.
inline Eigen::MatrixXd taylor_exp_oracle(const Eigen::MatrixXd& a) {
  using LD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const LD al = a.cast<long double>();
  LD sum = LD::Identity(a.rows(), a.cols());
  LD term = sum;
  for (int m = 1; m < 400; ++m) {
    term = (term * al) / static_cast<long double>(m);
    sum += term;
    if (m > 4 && term.norm() < 1e-30L) break;
  }
  return sum.cast<double>();
}

/// Eigen's own matrix exponential and logarithm (Pade-based).
inline Eigen::MatrixXd eigen_exp(const Eigen::MatrixXd& a) { return a.exp(); }
inline Eigen::MatrixXd eigen_log(const Eigen::MatrixXd& a) { return a.log(); }

inline double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b) {
  return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

}  // namespace lmc::test
