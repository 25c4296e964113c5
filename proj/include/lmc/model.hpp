#pragma once

// Markov models as sets of rate matrices: R+ = R intersected with L+, where
// L holds the zero-column-sum matrices and L+ those with non-negative
// off-diagonal entries. R is given by a declared span basis, by polynomial
// constraints on the off-diagonal entries, or both.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmc/linalg.hpp"

namespace lmc {

/// Off-diagonal entry q_{row,col}, 1-based.
struct IndexPair {
  int row = 1;
  int col = 2;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

struct Term {
  double coeff = 0.0;
  std::vector<IndexPair> monomial;  // empty monomial is a constant term
};

/// f(Q) = sum over terms of coeff * prod q_ij.
class PolynomialConstraint {
 public:
  explicit PolynomialConstraint(std::vector<Term> terms);

  /// Throws ModelError when an index exceeds the order of q.
  double evaluate(const SquareMatrix& q) const;
  /// Partial derivatives with respect to the off-diagonal entries, in
  /// row-major order of (i, j), i != j.
  std::vector<double> gradient(const SquareMatrix& q) const;

  const std::vector<Term>& terms() const { return terms_; }
  int degree() const { return degree_; }
  bool homogeneous() const { return homogeneous_; }
  int max_index() const;

 private:
  std::vector<Term> terms_;
  int degree_ = 0;
  bool homogeneous_ = true;
};

/// Shorthand for c * q_ab * q_cd * ...
Term term(double coeff, std::vector<IndexPair> monomial);

struct ParameterRange {
  double low = 0.0;
  double high = 1.0;
};

/// A named generator from a parameter vector to a rate matrix.
struct Parameterization {
  std::string name;
  int parameter_count = 0;
  std::function<SquareMatrix(std::span<const double>)> generate;
};

/// Immutable model definition.
///
/// When no basis is declared but a parameterization is, the span of the
/// model's rate matrices is computed at construction from 4 n^2 samples.
/// That span is exposed by span_basis() but is NOT used to decide
/// membership: a parameterized model with nonlinear constraints is a proper
/// subset of its span.
class RateModel {
 public:
  RateModel(std::string name, int n, std::vector<SquareMatrix> basis,
            std::vector<PolynomialConstraint> constraints,
            std::optional<Parameterization> parameterization = std::nullopt,
            std::vector<ParameterRange> parameter_ranges = {});

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  const std::vector<SquareMatrix>& basis() const { return basis_; }
  const std::vector<PolynomialConstraint>& constraints() const { return constraints_; }
  const std::optional<Parameterization>& parameterization() const { return parameterization_; }
  const std::vector<ParameterRange>& parameter_ranges() const { return parameter_ranges_; }

  bool has_basis() const { return !basis_.empty(); }
  bool has_constraints() const { return !constraints_.empty(); }
  bool samplable() const;

  /// Orthonormal basis of span(R+): the declared basis when present,
  /// otherwise sampled from the parameterization; empty if neither exists.
  const std::vector<SquareMatrix>& span_basis() const { return span_basis_; }

 private:
  std::string name_;
  int n_;
  std::vector<SquareMatrix> basis_;
  std::vector<PolynomialConstraint> constraints_;
  std::optional<Parameterization> parameterization_;
  std::vector<ParameterRange> parameter_ranges_;
  std::vector<SquareMatrix> span_basis_;
};

/// Every column of q sums to zero within tol.
bool is_in_L(const SquareMatrix& q, double tol);
/// is_in_L and every off-diagonal entry >= -tol.
bool is_stochastic_rate(const SquareMatrix& q, double tol);

/// Residual f_k(Q) of each constraint, in declaration order.
std::vector<double> evaluate_constraints(const RateModel& model, const SquareMatrix& q);

/// Dimension of the constraint variety near q: (n^2 - n) minus the rank of
/// the constraint Jacobian at q.
int local_variety_dimension(const RateModel& model, const SquareMatrix& q);

struct ScalingClosure {
  bool closed = false;
  /// Exact criterion once constraints are fixed: scaling closure holds iff
  /// all constraints are homogeneous.
  bool homogeneous = false;
};

/// Samples Q from R+ and checks alpha Q in R+ for alpha in {0, 0.5, 2, 10}.
ScalingClosure check_scaling_closure(const RateModel& model, int samples, std::uint64_t seed);

/// Deterministic draw from R+. Parameterized models draw uniformly over
/// their parameter ranges; basis-only models draw coefficients and reject
/// until the result is stochastic (at most 1000 attempts).
SquareMatrix sample_stochastic(const RateModel& model, std::uint64_t seed);

struct ModelMembership {
  bool in_R = false;
  bool in_R_plus = false;
  /// Span test result, when the model declares a basis.
  std::optional<MembershipResult> span;
  /// Constraint residuals, when R is decided by constraints.
  std::vector<double> constraint_residuals;

  /// Scalar distance used for verdicts: the span residual, or the largest
  /// absolute constraint residual.
  double residual() const;
};

/// R is decided by the declared basis when there is one, else by
/// constraints. Throws ModelError when the model has neither.
ModelMembership membership(const RateModel& model, const SquareMatrix& q,
                           double tol = kDefaultMembershipTol);

}  // namespace lmc
