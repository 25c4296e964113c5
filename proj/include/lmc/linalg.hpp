#pragma once

// Dense real matrix arithmetic for rate-matrix work: exponential, principal
// logarithm, commutator, numerical rank and least-squares span membership.
//
// Matrices follow the column-sum convention throughout: a rate matrix has
// columns summing to zero and e^{Q} is column-stochastic.

#include <Eigen/Dense>

#include <initializer_list>
#include <span>
#include <vector>

#include "lmc/errors.hpp"

namespace lmc {

/// Dense n x n real matrix with n >= 2 and finite entries.
class SquareMatrix {
 public:
  explicit SquareMatrix(Eigen::MatrixXd values);

  static SquareMatrix zero(int n);
  static SquareMatrix identity(int n);
  static SquareMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static SquareMatrix from_row_major(int n, std::span<const double> entries);

  int n() const { return static_cast<int>(values_.rows()); }
  double operator()(int i, int j) const { return values_(i, j); }
  const Eigen::MatrixXd& eigen() const { return values_; }

  std::vector<double> row_major() const;
  SquareMatrix transposed() const { return SquareMatrix(values_.transpose()); }

  /// Frobenius norm.
  double norm() const { return values_.norm(); }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.values_ == b.values_;
  }

 private:
  Eigen::MatrixXd values_;
};

enum class ArithOp { add, sub, mul };

/// Binary arithmetic. Throws DimensionError when orders differ.
SquareMatrix mat_arith(const SquareMatrix& a, const SquareMatrix& b, ArithOp op);
SquareMatrix scale(double alpha, const SquareMatrix& a);

inline SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  return mat_arith(a, b, ArithOp::add);
}
inline SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
  return mat_arith(a, b, ArithOp::sub);
}
inline SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  return mat_arith(a, b, ArithOp::mul);
}
inline SquareMatrix operator*(double alpha, const SquareMatrix& a) { return scale(alpha, a); }
inline SquareMatrix operator-(const SquareMatrix& a) { return scale(-1.0, a); }

/// e^A by scaling and squaring around a truncated Taylor series.
SquareMatrix matrix_exp(const SquareMatrix& a);

/// Principal logarithm via inverse scaling and squaring.
///
/// Throws LogDomainError when M is singular or has an eigenvalue within
/// 1e-12 of the closed negative real axis; no branch is chosen silently.
SquareMatrix matrix_log(const SquareMatrix& m);

/// Principal logarithm of I + X for ||X||_F < 1, summed directly from the
/// log(I + X) series. Avoids forming I + X when X is tiny.
SquareMatrix log_identity_plus(const Eigen::MatrixXd& x);

/// e^A - I, accurate when A is small.
Eigen::MatrixXd exp_minus_identity(const Eigen::MatrixXd& a);

/// [A, B] = AB - BA.
SquareMatrix commutator(const SquareMatrix& a, const SquareMatrix& b);

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultMembershipTol = 1e-8;
inline constexpr double kRoundTripTol = 1e-9;

/// Rank of the matrices viewed as vectors in R^{n*n}: singular values
/// greater than rel_tol times the largest. Zero for an empty or all-zero list.
int numerical_rank(std::span<const SquareMatrix> vectors, double rel_tol = kDefaultRankTol);

/// Orthonormal (Frobenius) basis of span(vectors), taken from the left
/// singular vectors. Each element's largest-magnitude entry is positive.
std::vector<SquareMatrix> orthonormal_basis(std::span<const SquareMatrix> vectors,
                                            double rel_tol = kDefaultRankTol);

struct MembershipResult {
  bool inside = false;
  std::vector<double> coefficients;
  /// min ||X - sum c_i B_i||_F / max(||X||_F, 1)
  double residual = 0.0;
};

MembershipResult least_squares_membership(const SquareMatrix& x,
                                          std::span<const SquareMatrix> basis,
                                          double tol = kDefaultMembershipTol);

}  // namespace lmc
