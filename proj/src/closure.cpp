#include "lmc/closure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lmc/random.hpp"

namespace lmc {

namespace {

constexpr std::size_t kMaxWitnesses = 10;

// Indices of the witnesses to keep: the first failure, the worst failure,
// then further failures in pair order up to the cap.
std::vector<std::size_t> select_witnesses(const std::vector<Witness>& failures) {
  std::vector<std::size_t> chosen;
  if (failures.empty()) return chosen;
  chosen.push_back(0);
  const auto worst = static_cast<std::size_t>(
      std::max_element(failures.begin(), failures.end(),
                       [](const Witness& a, const Witness& b) { return a.residual < b.residual; }) -
      failures.begin());
  if (worst != 0) chosen.push_back(worst);
  for (std::size_t k = 1; k < failures.size() && chosen.size() < kMaxWitnesses; ++k) {
    if (k != worst) chosen.push_back(k);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

ProductChain::ProductChain(int n, std::vector<ChainLink> links) : n_(n), links_(std::move(links)) {
  if (n_ < 2) throw DimensionError("chain order must be at least 2");
  for (const auto& link : links_) {
    if (link.rate.n() != n_) {
      throw DimensionError("chain links must share one matrix order");
    }
    if (!(link.duration >= 0.0) || !std::isfinite(link.duration)) {
      throw std::invalid_argument("chain durations must be finite and non-negative");
    }
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::closed:
      return "closed";
    case Verdict::not_closed:
      return "not_closed";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

SquareMatrix bch_truncated(const SquareMatrix& a, const SquareMatrix& b, int order) {
  if (order < 1 || order > 3) {
    throw std::invalid_argument("bch_truncated supports orders 1, 2 and 3 only");
  }
  SquareMatrix sum = a + b;
  if (order == 1) return sum;
  const SquareMatrix ab = commutator(a, b);
  sum = sum + scale(0.5, ab);
  if (order == 2) return sum;
  const SquareMatrix third = commutator(a, ab) + commutator(b, commutator(b, a));
  return sum + scale(1.0 / 12.0, third);
}

SquareMatrix log_product(const SquareMatrix& q, const SquareMatrix& q_prime) {
  if (q.n() != q_prime.n()) throw DimensionError("log_product: incompatible operands");
  // e^Q e^Q' - I = E + E' + E E', kept in this form so small generators do
  // not lose digits against the identity.
  const Eigen::MatrixXd e = exp_minus_identity(q.eigen());
  const Eigen::MatrixXd e_prime = exp_minus_identity(q_prime.eigen());
  const Eigen::MatrixXd x = e + e_prime + e * e_prime;
  if (x.norm() <= 0.25) return log_identity_plus(x);
  Eigen::MatrixXd product = x;
  product.diagonal().array() += 1.0;
  return matrix_log(SquareMatrix(std::move(product)));
}

SquareMatrix chain_substitution_matrix(const ProductChain& chain) {
  SquareMatrix product = SquareMatrix::identity(chain.n());
  for (const auto& link : chain.links()) {
    product = product * matrix_exp(scale(link.duration, link.rate));
  }
  return product;
}

LogClosureSample log_closure_sample(const RateModel& model, int chain_length, int samples,
                                    std::uint64_t seed) {
  if (chain_length < 1) throw std::invalid_argument("chain_length must be at least 1");
  if (!model.samplable()) {
    throw SamplingError("model '" + model.name() + "' has no parameterization or basis to sample");
  }
  LogClosureSample out;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const int length = rng.uniform_int(1, chain_length);
    std::vector<ChainLink> links;
    for (int k = 0; k < length; ++k) {
      SquareMatrix q = sample_stochastic(model, rng.next());
      links.push_back({std::move(q), rng.uniform()});
    }
    const double alpha = rng.uniform(0.0, 2.0);
    try {
      const SquareMatrix m = chain_substitution_matrix(ProductChain(model.n(), std::move(links)));
      out.elements.push_back(scale(alpha, matrix_log(m)));
    } catch (const LogDomainError&) {
      ++out.skipped;
    }
  }
  if (samples > 0 && out.elements.empty()) {
    throw SamplingError("no sampled chain admitted a principal logarithm");
  }
  return out;
}

std::vector<SquareMatrix> lie_closure(std::span<const SquareMatrix> basis, double rel_tol) {
  if (basis.empty()) throw std::invalid_argument("lie_closure needs a non-empty basis");
  for (const auto& b : basis) {
    if (!is_in_L(b, 1e-10 * std::max(1.0, b.norm()))) {
      throw ModelError("lie_closure input does not have zero column sums");
    }
  }
  const int n = basis.front().n();
  std::vector<SquareMatrix> current = orthonormal_basis(basis, rel_tol);
  // Each pass either grows the dimension or stops; n^2 passes bound it.
  for (int pass = 0; pass < n * n && !current.empty(); ++pass) {
    std::vector<SquareMatrix> candidates = current;
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j)
        candidates.push_back(commutator(current[i], current[j]));
    std::vector<SquareMatrix> next = orthonormal_basis(candidates, rel_tol);
    if (next.size() <= current.size()) return current;
    current = std::move(next);
  }
  return current;
}

ClosureReport multiplicative_closure_check(const RateModel& model, int samples,
                                           std::uint64_t seed, double tol) {
  if (!model.samplable()) {
    throw SamplingError("model '" + model.name() + "' has no parameterization or basis to sample");
  }
  if (!model.has_basis() && !model.has_constraints()) {
    throw ModelError("model '" + model.name() + "' has neither basis nor constraints");
  }

  ClosureReport report;
  report.model_name = model.name();
  report.ambient_dim = model.n() * model.n() - model.n();
  report.tolerance = tol;
  const auto& span = model.span_basis();
  report.span_dim = static_cast<int>(span.size());
  report.lie_closure_dim = span.empty() ? 0 : static_cast<int>(lie_closure(span).size());

  std::vector<Witness> failures;
  int failed_attempts = 0;
  for (int i = 0; i < samples; ++i) {
    Rng rng(seed + static_cast<std::uint64_t>(i));
    try {
      SquareMatrix q = sample_stochastic(model, rng.next());
      SquareMatrix q_prime = sample_stochastic(model, rng.next());
      SquareMatrix product_log = log_product(q, q_prime);
      ++report.samples_tested;
      const ModelMembership m = membership(model, product_log, tol);
      if (!m.in_R) {
        failures.push_back({std::move(q), std::move(q_prime), std::move(product_log), m.residual()});
      }
    } catch (const LogDomainError&) {
      ++failed_attempts;
    } catch (const SamplingError&) {
      ++failed_attempts;
    }
  }
  if (2 * failed_attempts > samples) {
    throw SamplingError("more than half of the sampled pairs failed to produce a log-product");
  }

  for (std::size_t k : select_witnesses(failures)) report.witnesses.push_back(failures[k]);

  if (!failures.empty()) {
    report.mult_closed_verdict = Verdict::not_closed;
  } else if (model.has_basis() && report.lie_closure_dim == report.span_dim) {
    report.mult_closed_verdict = Verdict::closed;
  } else {
    report.mult_closed_verdict = Verdict::inconclusive;
  }
  return report;
}

BchSweep bch_error_sweep(const SquareMatrix& a, const SquareMatrix& b, std::span<const int> orders,
                         std::span<const double> times) {
  BchSweep sweep;
  sweep.times.assign(times.begin(), times.end());
  sweep.orders.assign(orders.begin(), orders.end());
  for (int order : orders) {
    std::vector<double> errors;
    for (double t : times) {
      const SquareMatrix ta = scale(t, a);
      const SquareMatrix tb = scale(t, b);
      errors.push_back((log_product(ta, tb) - bch_truncated(ta, tb, order)).norm());
    }
    sweep.slopes.push_back(fit_log2_slope(times, errors));
    sweep.errors.push_back(std::move(errors));
  }
  return sweep;
}

std::vector<double> default_bch_times() {
  std::vector<double> times;
  for (int k = 1; k <= 6; ++k) times.push_back(std::ldexp(1.0, -k));
  return times;
}

double fit_log2_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs two or more matching points");
  }
  const auto count = static_cast<double>(x.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mean_x += std::log2(x[k]);
    mean_y += std::log2(y[k]);
  }
  mean_x /= count;
  mean_y /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log2(x[k]) - mean_x;
    sxy += dx * (std::log2(y[k]) - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::array<double, 4> kappa_witness(const SquareMatrix& q) {
  if (q.n() != 4) throw DimensionError("kappa_witness expects a 4x4 matrix");
  auto at = [&q](int i, int j) { return q(i - 1, j - 1); };
  const bool patterned = std::abs(at(1, 3) - at(1, 4)) <= 1e-6 &&
                         std::abs(at(2, 3) - at(2, 4)) <= 1e-6 &&
                         std::abs(at(3, 1) - at(3, 2)) <= 1e-6 &&
                         std::abs(at(4, 1) - at(4, 2)) <= 1e-6;
  if (!patterned) throw ModelError("kappa_witness: matrix lacks the Model 8.8 pattern");
  auto ratio = [](double num, double den) {
    if (std::abs(den) < 1e-14) throw std::domain_error("kappa_witness: zero denominator");
    return num / den;
  };
  return {ratio(at(1, 2), at(1, 3)), ratio(at(2, 1), at(2, 3)), ratio(at(3, 4), at(3, 1)),
          ratio(at(4, 3), at(4, 1))};
}

}  // namespace lmc
