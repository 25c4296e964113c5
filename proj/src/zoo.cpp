#include "lmc/zoo.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace lmc::zoo {

namespace {

constexpr int kStates = 4;
constexpr ParameterRange kRateRange{0.001, 0.05};
constexpr ParameterRange kKappaRange{0.5, 2.0};
constexpr ParameterRange kExchangeRange{0.5, 2.0};

// Transitions: A<->G and C<->T (0-based pairs).
bool is_transition(int i, int j) {
  return (i == 0 && j == 1) || (i == 1 && j == 0) || (i == 2 && j == 3) || (i == 3 && j == 2);
}

// Fills the diagonal so that every column sums to zero.
SquareMatrix with_zero_column_sums(Eigen::MatrixXd q) {
  q.diagonal().setZero();
  q.diagonal() = -q.colwise().sum().transpose();
  return SquareMatrix(std::move(q));
}

// 1 at each listed (1-based) off-diagonal entry, diagonal compensating.
SquareMatrix pattern(std::initializer_list<IndexPair> entries) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(kStates, kStates);
  for (const auto& p : entries) q(p.row - 1, p.col - 1) = 1.0;
  return with_zero_column_sums(std::move(q));
}

void require_non_negative(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": parameters must be >= 0");
  }
}

// a*d - b*c for entries given as 1-based pairs.
PolynomialConstraint ratio_equality(IndexPair a, IndexPair d, IndexPair b, IndexPair c) {
  return PolynomialConstraint({term(1.0, {a, d}), term(-1.0, {b, c})});
}

PolynomialConstraint entry_equality(IndexPair a, IndexPair b) {
  return PolynomialConstraint({term(1.0, {a}), term(-1.0, {b})});
}

SquareMatrix jc(double mu) {
  const std::array<double, 1> p{mu};
  require_non_negative(p, "jc");
  Eigen::MatrixXd q = Eigen::MatrixXd::Constant(kStates, kStates, mu);
  return with_zero_column_sums(std::move(q));
}

SquareMatrix f81(std::span<const double> freqs) {
  require_non_negative(freqs, "f81");
  Eigen::MatrixXd q(kStates, kStates);
  for (int i = 0; i < kStates; ++i) q.row(i).setConstant(freqs[static_cast<std::size_t>(i)]);
  return with_zero_column_sums(std::move(q));
}

SquareMatrix k2p(double transition, double transversion) {
  const std::array<double, 2> p{transition, transversion};
  require_non_negative(p, "k2p");
  Eigen::MatrixXd q(kStates, kStates);
  for (int i = 0; i < kStates; ++i)
    for (int j = 0; j < kStates; ++j) q(i, j) = is_transition(i, j) ? transition : transversion;
  return with_zero_column_sums(std::move(q));
}

Parameterization make_parameterization(std::string name, int count,
                                       std::function<SquareMatrix(std::span<const double>)> f) {
  return Parameterization{std::move(name), count,
                          [count, f = std::move(f)](std::span<const double> p) {
                            if (static_cast<int>(p.size()) != count) {
                              throw std::invalid_argument("wrong number of parameters");
                            }
                            return f(p);
                          }};
}

std::vector<ParameterRange> repeat(ParameterRange r, int count) {
  return std::vector<ParameterRange>(static_cast<std::size_t>(count), r);
}

}  // namespace

SquareMatrix hky(double alpha_a, double alpha_g, double alpha_c, double alpha_t, double kappa) {
  const std::array<double, 5> p{alpha_a, alpha_g, alpha_c, alpha_t, kappa};
  require_non_negative(p, "hky");
  const std::array<double, 4> alpha{alpha_a, alpha_g, alpha_c, alpha_t};
  Eigen::MatrixXd q(kStates, kStates);
  for (int i = 0; i < kStates; ++i)
    for (int j = 0; j < kStates; ++j)
      q(i, j) = alpha[static_cast<std::size_t>(i)] * (is_transition(i, j) ? kappa : 1.0);
  return with_zero_column_sums(std::move(q));
}

SquareMatrix gtr(std::span<const double> exchangeabilities, std::span<const double> frequencies) {
  if (exchangeabilities.size() != 6 || frequencies.size() != 4) {
    throw std::invalid_argument("gtr: expects 6 exchangeabilities and 4 frequencies");
  }
  require_non_negative(exchangeabilities, "gtr");
  require_non_negative(frequencies, "gtr");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(kStates, kStates);
  int k = 0;
  for (int i = 0; i < kStates; ++i)
    for (int j = i + 1; j < kStates; ++j) {
      s(i, j) = s(j, i) = exchangeabilities[static_cast<std::size_t>(k++)];
    }
  Eigen::MatrixXd q(kStates, kStates);
  for (int i = 0; i < kStates; ++i) q.row(i) = frequencies[static_cast<std::size_t>(i)] * s.row(i);
  return with_zero_column_sums(std::move(q));
}

std::optional<Parameterization> builtin_parameterization(const std::string& name) {
  if (name == "hky") {
    return make_parameterization("hky", 5, [](std::span<const double> p) {
      return hky(p[0], p[1], p[2], p[3], p[4]);
    });
  }
  if (name == "gtr") {
    return make_parameterization("gtr", 10, [](std::span<const double> p) {
      return gtr(p.subspan(0, 6), p.subspan(6, 4));
    });
  }
  if (name == "jc") {
    return make_parameterization("jc", 1, [](std::span<const double> p) { return jc(p[0]); });
  }
  if (name == "f81") {
    return make_parameterization("f81", 4, [](std::span<const double> p) { return f81(p); });
  }
  if (name == "k2p") {
    return make_parameterization("k2p", 2,
                                 [](std::span<const double> p) { return k2p(p[0], p[1]); });
  }
  return std::nullopt;
}

RateModel hky_model() {
  std::vector<PolynomialConstraint> constraints;
  constraints.push_back(entry_equality({1, 3}, {1, 4}));
  constraints.push_back(entry_equality({2, 3}, {2, 4}));
  constraints.push_back(entry_equality({3, 1}, {3, 2}));
  constraints.push_back(entry_equality({4, 1}, {4, 2}));
  // Ratios k1 = q12/q13, k2 = q21/q23, k3 = q34/q31, k4 = q43/q41.
  // k1 = k2, k3 = k1, k4 = k1 as commonly displayed, then the rest of the
  // pairwise orbit.
  constraints.push_back(ratio_equality({1, 2}, {2, 3}, {2, 1}, {1, 3}));
  constraints.push_back(ratio_equality({3, 4}, {1, 3}, {1, 2}, {3, 1}));
  constraints.push_back(ratio_equality({4, 3}, {1, 3}, {1, 2}, {4, 1}));
  constraints.push_back(ratio_equality({2, 1}, {3, 1}, {3, 4}, {2, 3}));
  constraints.push_back(ratio_equality({2, 1}, {4, 1}, {4, 3}, {2, 3}));
  constraints.push_back(ratio_equality({3, 4}, {4, 1}, {4, 3}, {3, 1}));

  auto ranges = repeat(kRateRange, 4);
  ranges.push_back(kKappaRange);
  return RateModel("hky", kStates, {}, std::move(constraints), builtin_parameterization("hky"),
                   std::move(ranges));
}

RateModel lm88_model() {
  std::vector<SquareMatrix> basis{
      pattern({{1, 3}, {1, 4}}),  // alpha
      pattern({{2, 3}, {2, 4}}),  // beta
      pattern({{3, 1}, {3, 2}}),  // gamma
      pattern({{4, 1}, {4, 2}}),  // delta
      pattern({{1, 2}}),          // kappa_1
      pattern({{2, 1}}),          // kappa_2
      pattern({{3, 4}}),          // kappa_3
      pattern({{4, 3}}),          // kappa_4
  };
  return RateModel("lm88", kStates, std::move(basis), {});
}

RateModel jc_model() {
  return RateModel("jc", kStates, {jc(1.0)}, {}, builtin_parameterization("jc"), {kRateRange});
}

RateModel f81_model() {
  std::vector<SquareMatrix> basis;
  for (int i = 1; i <= kStates; ++i) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(kStates, kStates);
    q.row(i - 1).setOnes();
    basis.push_back(with_zero_column_sums(std::move(q)));
  }
  return RateModel("f81", kStates, std::move(basis), {}, builtin_parameterization("f81"),
                   repeat(kRateRange, 4));
}

RateModel k2p_model() {
  return RateModel("k2p", kStates, {k2p(1.0, 0.0), k2p(0.0, 1.0)}, {},
                   builtin_parameterization("k2p"), repeat(kRateRange, 2));
}

RateModel gtr_model() {
  // Kolmogorov criterion on every 3-cycle: q_ij q_jk q_ki = q_ik q_kj q_ji.
  std::vector<PolynomialConstraint> constraints;
  for (int i = 1; i <= kStates; ++i)
    for (int j = i + 1; j <= kStates; ++j)
      for (int k = j + 1; k <= kStates; ++k) {
        constraints.emplace_back(std::vector<Term>{
            term(1.0, {{i, j}, {j, k}, {k, i}}),
            term(-1.0, {{i, k}, {k, j}, {j, i}}),
        });
      }
  auto ranges = repeat(kExchangeRange, 6);
  for (int i = 0; i < 4; ++i) ranges.push_back(kRateRange);
  return RateModel("gtr", kStates, {}, std::move(constraints), builtin_parameterization("gtr"),
                   std::move(ranges));
}

std::pair<SquareMatrix, SquareMatrix> reference_hky_pair() {
  return {hky(0.02, 0.01, 0.005, 0.009, 1.5), hky(0.03, 0.01, 0.006, 0.008, 1.4)};
}

SquareMatrix reference_log_product() {
  return SquareMatrix::from_rows({
      {-0.0571752, 0.0718248, 0.0498348, 0.0498348},
      {0.0291051, -0.0998949, 0.0200951, 0.0200951},
      {0.0109967, 0.0109967, -0.0947047, 0.0158953},
      {0.0170734, 0.0170734, 0.0247748, -0.0858252},
  });
}

std::vector<std::string> names() { return {"hky", "lm88", "jc", "f81", "k2p", "gtr"}; }

std::optional<RateModel> by_name(const std::string& name) {
  if (name == "hky") return hky_model();
  if (name == "lm88") return lm88_model();
  if (name == "jc") return jc_model();
  if (name == "f81") return f81_model();
  if (name == "k2p") return k2p_model();
  if (name == "gtr") return gtr_model();
  return std::nullopt;
}

std::vector<ZooEntry> entries() {
  std::vector<ZooEntry> out;
  out.push_back({hky_model(), 8, false, Provenance::paper});
  out.push_back({lm88_model(), 8, true, Provenance::paper});
  out.push_back({jc_model(), 1, true, Provenance::standard_literature});
  out.push_back({f81_model(), 4, true, Provenance::standard_literature});
  out.push_back({k2p_model(), 2, true, Provenance::standard_literature});
  out.push_back({gtr_model(), 12, false, Provenance::standard_literature});
  return out;
}

}  // namespace lmc::zoo
