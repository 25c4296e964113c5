#include "lmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace lmc {

namespace {

void require_same_order(const SquareMatrix& a, const SquareMatrix& b, const char* what) {
  if (a.n() != b.n()) {
    throw DimensionError(std::string(what) + ": incompatible operands of order " +
                         std::to_string(a.n()) + " and " + std::to_string(b.n()));
  }
}

Eigen::VectorXd vectorize(const SquareMatrix& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.eigen().data(), m.eigen().size());
}

SquareMatrix unvectorize(const Eigen::VectorXd& v, int n) {
  return SquareMatrix(Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n));
}

// Columns are the vectorized inputs.
Eigen::MatrixXd stack_columns(std::span<const SquareMatrix> vectors) {
  const int n = vectors.front().n();
  Eigen::MatrixXd stacked(n * n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].n() != n) {
      throw DimensionError("matrices in a span must share one order");
    }
    stacked.col(static_cast<Eigen::Index>(k)) = vectorize(vectors[k]);
  }
  return stacked;
}

// Distance from z to the ray (-inf, 0].
double distance_to_negative_axis(std::complex<double> z) {
  return z.real() <= 0.0 ? std::abs(z.imag()) : std::abs(z);
}

Eigen::MatrixXd principal_sqrt(const Eigen::MatrixXd& m) {
  // Denman-Beavers: Y -> sqrt(M), Z -> sqrt(M)^{-1}.
  Eigen::MatrixXd y = m;
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (int iter = 0; iter < 100; ++iter) {
    const Eigen::MatrixXd y_inv = y.partialPivLu().inverse();
    const Eigen::MatrixXd z_inv = z.partialPivLu().inverse();
    Eigen::MatrixXd y_next = 0.5 * (y + z_inv);
    z = 0.5 * (z + y_inv);
    const double step = (y_next - y).norm();
    y = std::move(y_next);
    if (!y.allFinite()) break;
    if (step <= 1e-15 * y.norm()) return y;
  }
  throw LogDomainError("matrix square root iteration did not converge");
}

}  // namespace

SquareMatrix::SquareMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw DimensionError("matrix is not square");
  }
  if (values_.rows() < 2) {
    throw DimensionError("matrix order must be at least 2");
  }
  if (!values_.allFinite()) {
    throw DimensionError("matrix has non-finite entries");
  }
}

SquareMatrix SquareMatrix::zero(int n) { return SquareMatrix(Eigen::MatrixXd::Zero(n, n)); }

SquareMatrix SquareMatrix::identity(int n) {
  return SquareMatrix(Eigen::MatrixXd::Identity(n, n));
}

SquareMatrix SquareMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd values(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw DimensionError("row length does not match matrix order");
    }
    Eigen::Index j = 0;
    for (double v : row) values(i, j++) = v;
    ++i;
  }
  return SquareMatrix(std::move(values));
}

SquareMatrix SquareMatrix::from_row_major(int n, std::span<const double> entries) {
  if (n < 0 || entries.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw DimensionError("expected " + std::to_string(n) + "x" + std::to_string(n) +
                         " entries, got " + std::to_string(entries.size()));
  }
  Eigen::MatrixXd values(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) values(i, j) = entries[static_cast<std::size_t>(i * n + j)];
  return SquareMatrix(std::move(values));
}

std::vector<double> SquareMatrix::row_major() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(values_.size()));
  for (Eigen::Index i = 0; i < values_.rows(); ++i)
    for (Eigen::Index j = 0; j < values_.cols(); ++j) out.push_back(values_(i, j));
  return out;
}

SquareMatrix mat_arith(const SquareMatrix& a, const SquareMatrix& b, ArithOp op) {
  require_same_order(a, b, "mat_arith");
  switch (op) {
    case ArithOp::add:
      return SquareMatrix(a.eigen() + b.eigen());
    case ArithOp::sub:
      return SquareMatrix(a.eigen() - b.eigen());
    case ArithOp::mul:
      return SquareMatrix(a.eigen() * b.eigen());
  }
  throw std::logic_error("unknown arithmetic op");
}

SquareMatrix scale(double alpha, const SquareMatrix& a) { return SquareMatrix(alpha * a.eigen()); }

Eigen::MatrixXd exp_minus_identity(const Eigen::MatrixXd& a) {
  int squarings = 0;
  double norm = a.norm();
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd scaled = std::ldexp(1.0, -squarings) * a;

  // Taylor series for e^B - I with B = A / 2^s.
  Eigen::MatrixXd sum = scaled;
  Eigen::MatrixXd term = scaled;
  for (int m = 2; m < 64 && term.norm() >= 1e-18; ++m) {
    term = (term * scaled) / static_cast<double>(m);
    sum += term;
  }
  // e^{2B} - I = 2(e^B - I) + (e^B - I)^2
  for (int s = 0; s < squarings; ++s) sum = 2.0 * sum + sum * sum;
  return sum;
}

SquareMatrix matrix_exp(const SquareMatrix& a) {
  Eigen::MatrixXd e = exp_minus_identity(a.eigen());
  e.diagonal().array() += 1.0;
  return SquareMatrix(std::move(e));
}

SquareMatrix log_identity_plus(const Eigen::MatrixXd& x) {
  const double norm = x.norm();
  if (!(norm < 1.0)) {
    throw LogDomainError("log(I + X) series requires ||X|| < 1");
  }
  Eigen::MatrixXd sum = x;
  Eigen::MatrixXd power = x;
  for (int m = 2; m < 400; ++m) {
    power = power * x;
    const double sign = (m % 2 == 0) ? -1.0 : 1.0;
    const Eigen::MatrixXd term = (sign / m) * power;
    sum += term;
    if (term.norm() <= 1e-18 * norm) break;
  }
  return SquareMatrix(std::move(sum));
}

SquareMatrix matrix_log(const SquareMatrix& m) {
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(m.eigen(), /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success) {
    throw LogDomainError("eigenvalue computation failed");
  }
  for (const auto& lambda : eig.eigenvalues()) {
    if (std::abs(lambda) <= 1e-12) {
      throw LogDomainError("matrix is singular; principal logarithm undefined");
    }
    if (distance_to_negative_axis(lambda) <= 1e-12) {
      throw LogDomainError("eigenvalue on the closed negative real axis; principal logarithm undefined");
    }
  }

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(m.n(), m.n());
  Eigen::MatrixXd root = m.eigen();
  int roots = 0;
  while ((root - identity).norm() > 0.25) {
    if (roots == 64) {
      throw LogDomainError("inverse scaling did not approach the identity");
    }
    root = principal_sqrt(root);
    ++roots;
  }
  return scale(std::ldexp(1.0, roots), log_identity_plus(root - identity));
}

SquareMatrix commutator(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_order(a, b, "commutator");
  return SquareMatrix(a.eigen() * b.eigen() - b.eigen() * a.eigen());
}

int numerical_rank(std::span<const SquareMatrix> vectors, double rel_tol) {
  if (vectors.empty()) return 0;
  const Eigen::MatrixXd stacked = stack_columns(vectors);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  return static_cast<int>((sigma.array() > rel_tol * sigma(0)).count());
}

std::vector<SquareMatrix> orthonormal_basis(std::span<const SquareMatrix> vectors,
                                            double rel_tol) {
  std::vector<SquareMatrix> basis;
  if (vectors.empty()) return basis;
  const int n = vectors.front().n();
  const Eigen::MatrixXd stacked = stack_columns(vectors);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return basis;
  for (Eigen::Index k = 0; k < sigma.size() && sigma(k) > rel_tol * sigma(0); ++k) {
    Eigen::VectorXd u = svd.matrixU().col(k);
    Eigen::Index largest = 0;
    u.cwiseAbs().maxCoeff(&largest);
    if (u(largest) < 0.0) u = -u;
    basis.push_back(unvectorize(u, n));
  }
  return basis;
}

MembershipResult least_squares_membership(const SquareMatrix& x,
                                          std::span<const SquareMatrix> basis, double tol) {
  if (basis.empty()) {
    throw DimensionError("membership test needs a non-empty basis");
  }
  if (basis.front().n() != x.n()) {
    throw DimensionError("matrix order does not match the basis");
  }
  const Eigen::MatrixXd stacked = stack_columns(basis);
  const Eigen::VectorXd target = vectorize(x);
  const Eigen::VectorXd coeffs = stacked.completeOrthogonalDecomposition().solve(target);

  MembershipResult result;
  result.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
  result.residual = (target - stacked * coeffs).norm() / std::max(x.norm(), 1.0);
  result.inside = result.residual <= tol;
  return result;
}

}  // namespace lmc
