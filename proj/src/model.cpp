#include "lmc/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "lmc/random.hpp"

namespace lmc {

namespace {

constexpr int kMaxSampleAttempts = 1000;
constexpr std::array<double, 4> kScalingFactors = {0.0, 0.5, 2.0, 10.0};

int off_diagonal_slot(IndexPair p, int n) {
  // Row-major position among the n^2 - n off-diagonal entries.
  const int i = p.row - 1;
  const int j = p.col - 1;
  return i * (n - 1) + (j < i ? j : j - 1);
}

double entry(const SquareMatrix& q, IndexPair p) {
  if (p.row > q.n() || p.col > q.n()) {
    throw ModelError("constraint index (" + std::to_string(p.row) + "," + std::to_string(p.col) +
                     ") out of range for order " + std::to_string(q.n()));
  }
  return q(p.row - 1, p.col - 1);
}

SquareMatrix sample_from_parameterization(const RateModel& model, Rng& rng) {
  const auto& param = *model.parameterization();
  std::vector<double> values(model.parameter_ranges().size());
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      const auto& range = model.parameter_ranges()[k];
      values[k] = rng.uniform(range.low, range.high);
    }
    SquareMatrix q = param.generate(values);
    if (q.n() != model.n()) {
      throw ModelError("parameterization '" + param.name + "' produced a matrix of wrong order");
    }
    if (is_stochastic_rate(q, 1e-12) && q.norm() > 0.0) return q;
  }
  throw SamplingError("parameterization of '" + model.name() + "' never produced a rate matrix");
}

SquareMatrix sample_from_basis(const RateModel& model, Rng& rng) {
  const auto& basis = model.basis();
  const int n = model.n();
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    // Alternate non-negative and signed coefficients: the first reaches
    // every cone spanned by stochastic generators, the second covers
    // bases with mixed-sign elements.
    const double low = (attempt % 2 == 0) ? 0.0 : -1.0;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (const auto& b : basis) q += rng.uniform(low, 1.0) * b.eigen();
    const double target_norm = rng.uniform(0.05, 0.5);
    const double norm = q.norm();
    if (norm <= 1e-12) continue;
    SquareMatrix candidate((target_norm / norm) * q);
    if (is_stochastic_rate(candidate, 1e-12)) return candidate;
  }
  throw SamplingError("sampler cannot reach L+ from the basis of '" + model.name() + "' in " +
                      std::to_string(kMaxSampleAttempts) + " attempts");
}

}  // namespace

Term term(double coeff, std::vector<IndexPair> monomial) { return Term{coeff, std::move(monomial)}; }

PolynomialConstraint::PolynomialConstraint(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw ModelError("a constraint needs at least one term");
  }
  std::size_t first_length = terms_.front().monomial.size();
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coeff)) throw ModelError("constraint coefficient is not finite");
    for (const auto& p : t.monomial) {
      if (p.row < 1 || p.col < 1) throw ModelError("constraint indices are 1-based");
      if (p.row == p.col) {
        throw ModelError("constraints range over off-diagonal entries only");
      }
    }
    degree_ = std::max(degree_, static_cast<int>(t.monomial.size()));
    if (t.monomial.size() != first_length) homogeneous_ = false;
  }
}

int PolynomialConstraint::max_index() const {
  int result = 0;
  for (const auto& t : terms_)
    for (const auto& p : t.monomial) result = std::max({result, p.row, p.col});
  return result;
}

double PolynomialConstraint::evaluate(const SquareMatrix& q) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double product = t.coeff;
    for (const auto& p : t.monomial) product *= entry(q, p);
    sum += product;
  }
  return sum;
}

std::vector<double> PolynomialConstraint::gradient(const SquareMatrix& q) const {
  const int n = q.n();
  std::vector<double> grad(static_cast<std::size_t>(n * (n - 1)), 0.0);
  for (const auto& t : terms_) {
    for (std::size_t k = 0; k < t.monomial.size(); ++k) {
      double product = t.coeff;
      for (std::size_t m = 0; m < t.monomial.size(); ++m) {
        if (m != k) product *= entry(q, t.monomial[m]);
      }
      entry(q, t.monomial[k]);  // range check
      grad[static_cast<std::size_t>(off_diagonal_slot(t.monomial[k], n))] += product;
    }
  }
  return grad;
}

RateModel::RateModel(std::string name, int n, std::vector<SquareMatrix> basis,
                     std::vector<PolynomialConstraint> constraints,
                     std::optional<Parameterization> parameterization,
                     std::vector<ParameterRange> parameter_ranges)
    : name_(std::move(name)),
      n_(n),
      basis_(std::move(basis)),
      constraints_(std::move(constraints)),
      parameterization_(std::move(parameterization)),
      parameter_ranges_(std::move(parameter_ranges)) {
  if (n_ < 2) throw ModelError("model order must be at least 2");
  for (const auto& b : basis_) {
    if (b.n() != n_) throw DimensionError("basis matrix order does not match model order");
    if (!is_in_L(b, 1e-10 * std::max(1.0, b.norm()))) {
      throw ModelError("basis matrix of '" + name_ + "' does not have zero column sums");
    }
  }
  for (const auto& c : constraints_) {
    if (c.max_index() > n_) {
      throw ModelError("constraint index out of range for model '" + name_ + "'");
    }
    for (const auto& b : basis_) {
      if (std::abs(c.evaluate(b)) > 1e-12) {
        throw ModelError("basis of '" + name_ + "' violates one of its constraints");
      }
    }
  }
  if (parameterization_ && !parameter_ranges_.empty() &&
      static_cast<int>(parameter_ranges_.size()) != parameterization_->parameter_count) {
    throw ModelError("parameter_ranges length does not match the parameterization");
  }
  for (const auto& r : parameter_ranges_) {
    if (!(r.low <= r.high)) throw ModelError("parameter range has low > high");
  }

  if (has_basis()) {
    span_basis_ = orthonormal_basis(basis_);
  } else if (parameterization_ && !parameter_ranges_.empty()) {
    Rng rng(0x5eed);
    std::vector<SquareMatrix> samples;
    for (int k = 0; k < 4 * n_ * n_; ++k) samples.push_back(sample_from_parameterization(*this, rng));
    span_basis_ = orthonormal_basis(samples);
  }
}

bool RateModel::samplable() const {
  return (parameterization_ && !parameter_ranges_.empty()) || has_basis();
}

bool is_in_L(const SquareMatrix& q, double tol) {
  const Eigen::RowVectorXd sums = q.eigen().colwise().sum();
  return (sums.array().abs() <= tol).all();
}

bool is_stochastic_rate(const SquareMatrix& q, double tol) {
  if (!is_in_L(q, tol)) return false;
  for (int i = 0; i < q.n(); ++i)
    for (int j = 0; j < q.n(); ++j)
      if (i != j && q(i, j) < -tol) return false;
  return true;
}

std::vector<double> evaluate_constraints(const RateModel& model, const SquareMatrix& q) {
  if (q.n() != model.n()) throw DimensionError("matrix order does not match model order");
  std::vector<double> residuals;
  residuals.reserve(model.constraints().size());
  for (const auto& c : model.constraints()) residuals.push_back(c.evaluate(q));
  return residuals;
}

int local_variety_dimension(const RateModel& model, const SquareMatrix& q) {
  const int ambient = model.n() * (model.n() - 1);
  if (model.constraints().empty()) return ambient;
  Eigen::MatrixXd jacobian(static_cast<Eigen::Index>(model.constraints().size()), ambient);
  for (std::size_t k = 0; k < model.constraints().size(); ++k) {
    const auto grad = model.constraints()[k].gradient(q);
    jacobian.row(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::RowVectorXd>(grad.data(), ambient);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian);
  const auto& sigma = svd.singularValues();
  const int rank = sigma.size() == 0 || sigma(0) == 0.0
                       ? 0
                       : static_cast<int>((sigma.array() > 1e-8 * sigma(0)).count());
  return ambient - rank;
}

ScalingClosure check_scaling_closure(const RateModel& model, int samples, std::uint64_t seed) {
  if (!model.samplable()) {
    throw SamplingError("model '" + model.name() + "' has no parameterization or basis to sample");
  }
  ScalingClosure result;
  result.homogeneous = std::all_of(model.constraints().begin(), model.constraints().end(),
                                   [](const auto& c) { return c.homogeneous(); });
  result.closed = true;
  for (int s = 0; s < samples && result.closed; ++s) {
    const SquareMatrix q = sample_stochastic(model, seed + static_cast<std::uint64_t>(s));
    for (double alpha : kScalingFactors) {
      if (!membership(model, scale(alpha, q), kDefaultMembershipTol).in_R_plus) {
        result.closed = false;
        break;
      }
    }
  }
  return result;
}

SquareMatrix sample_stochastic(const RateModel& model, std::uint64_t seed) {
  Rng rng(seed);
  if (model.parameterization() && !model.parameter_ranges().empty()) {
    return sample_from_parameterization(model, rng);
  }
  if (model.has_basis()) return sample_from_basis(model, rng);
  throw SamplingError("model '" + model.name() + "' has no parameterization or basis to sample");
}

double ModelMembership::residual() const {
  if (span) return span->residual;
  double worst = 0.0;
  for (double r : constraint_residuals) worst = std::max(worst, std::abs(r));
  return worst;
}

ModelMembership membership(const RateModel& model, const SquareMatrix& q, double tol) {
  if (q.n() != model.n()) throw DimensionError("matrix order does not match model order");
  ModelMembership result;
  if (model.has_basis()) {
    result.span = least_squares_membership(q, model.basis(), tol);
    result.in_R = result.span->inside;
  } else if (model.has_constraints()) {
    result.constraint_residuals = evaluate_constraints(model, q);
    result.in_R = is_in_L(q, tol) && result.residual() <= tol;
  } else {
    throw ModelError("model '" + model.name() + "' has neither basis nor constraints");
  }
  result.in_R_plus = result.in_R && is_stochastic_rate(q, tol);
  return result;
}

}  // namespace lmc
