#pragma once

// Multiplicative closure of rate-matrix models.
//
// A model is multiplicatively closed when log(e^Q e^Q') stays inside R for
// Q, Q' in R+. Given polynomial constraints and closure under non-negative
// scaling, that holds exactly when R is the linear span of R+ and that span
// is closed under the commutator. The verdicts here follow that criterion:
// refutation by a concrete witness pair, confirmation by bracket closure of
// a declared span basis.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lmc/model.hpp"

namespace lmc {

struct ChainLink {
  SquareMatrix rate;
  double duration = 0.0;
};

/// Ordered product e^{Q_1 t_1} e^{Q_2 t_2} ...; empty is the identity.
class ProductChain {
 public:
  explicit ProductChain(int n, std::vector<ChainLink> links = {});

  int n() const { return n_; }
  const std::vector<ChainLink>& links() const { return links_; }
  bool empty() const { return links_.empty(); }

 private:
  int n_;
  std::vector<ChainLink> links_;
};

enum class Verdict { closed, not_closed, inconclusive };

std::string to_string(Verdict v);

struct Witness {
  SquareMatrix q;
  SquareMatrix q_prime;
  SquareMatrix log_product;
  double residual = 0.0;
};

struct ClosureReport {
  std::string model_name;
  int span_dim = 0;
  int lie_closure_dim = 0;
  int ambient_dim = 0;
  Verdict mult_closed_verdict = Verdict::inconclusive;
  std::vector<Witness> witnesses;
  int samples_tested = 0;
  double tolerance = 0.0;
};

/// A + B, then + [A,B]/2 (order 2), then + ([A,[A,B]] + [B,[B,A]])/12
/// (order 3). Throws std::invalid_argument for other orders.
SquareMatrix bch_truncated(const SquareMatrix& a, const SquareMatrix& b, int order);

/// log(e^Q e^Q'). Throws LogDomainError when the product has no principal
/// logarithm.
SquareMatrix log_product(const SquareMatrix& q, const SquareMatrix& q_prime);

SquareMatrix chain_substitution_matrix(const ProductChain& chain);

struct LogClosureSample {
  std::vector<SquareMatrix> elements;
  int skipped = 0;
};

/// alpha * log(M) for random chains M of length 1..chain_length, link
/// durations uniform in [0, 1] and alpha uniform in [0, 2]. Chains without
/// a principal logarithm are skipped and counted; throws SamplingError if
/// every chain is skipped.
LogClosureSample log_closure_sample(const RateModel& model, int chain_length, int samples,
                                    std::uint64_t seed);

/// Orthonormal basis of the smallest bracket-closed subspace containing
/// span(basis). Throws ModelError if an input is not in L within 1e-10.
std::vector<SquareMatrix> lie_closure(std::span<const SquareMatrix> basis,
                                      double rel_tol = kDefaultRankTol);

/// Samples pairs from R+ and tests whether each log-product lies in R
/// (stochasticity is not required). Pair i draws from seed + i.
ClosureReport multiplicative_closure_check(const RateModel& model, int samples,
                                           std::uint64_t seed, double tol = kDefaultMembershipTol);

struct BchSweep {
  std::vector<double> times;
  std::vector<int> orders;
  /// errors[k][m] = ||log_product(t_m A, t_m B) - bch_truncated(t_m A, t_m B, orders[k])||_F
  std::vector<std::vector<double>> errors;
  /// Least-squares slope of log2(error) against log2(t), per order.
  std::vector<double> slopes;
};

/// Truncation error of the BCH series over a sweep of times.
BchSweep bch_error_sweep(const SquareMatrix& a, const SquareMatrix& b, std::span<const int> orders,
                         std::span<const double> times);

/// Times 1/2, 1/4, ..., 1/64.
std::vector<double> default_bch_times();

/// Least-squares slope of log2(y) against log2(x).
double fit_log2_slope(std::span<const double> x, std::span<const double> y);

/// Ratios (q12/q13, q21/q23, q34/q31, q43/q41) that HKY membership forces
/// equal. Requires the 4x4 Model 8.8 pattern within 1e-6.
std::array<double, 4> kappa_witness(const SquareMatrix& q);

}  // namespace lmc
