#include "doctest.h"

#include <cmath>

#include "lmc/closure.hpp"
#include "lmc/exact_rank.hpp"
#include "lmc/zoo.hpp"
#include "support.hpp"

using namespace lmc;

namespace {

using RationalMatrix = std::vector<std::vector<Rational>>;

RationalMatrix to_rational(const SquareMatrix& m) {
  RationalMatrix out(static_cast<std::size_t>(m.n()), std::vector<Rational>(static_cast<std::size_t>(m.n())));
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = exact_rational(m(i, j));
  return out;
}

RationalMatrix bracket(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size();
  RationalMatrix out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
  return out;
}

std::vector<Rational> flatten(const RationalMatrix& m) {
  std::vector<Rational> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

// Brute-force saturation: keep every bracket of every pair until the exact
// rank stops growing.
int exact_lie_closure_dim(const std::vector<SquareMatrix>& basis) {
  std::vector<RationalMatrix> elements;
  for (const auto& b : basis) elements.push_back(to_rational(b));
  auto rank_of = [](const std::vector<RationalMatrix>& list) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& m : list) rows.push_back(flatten(m));
    return exact_rank(rows);
  };
  int rank = rank_of(elements);
  while (true) {
    std::vector<RationalMatrix> grown = elements;
    for (std::size_t i = 0; i < elements.size(); ++i)
      for (std::size_t j = i + 1; j < elements.size(); ++j)
        grown.push_back(bracket(elements[i], elements[j]));
    const int next = rank_of(grown);
    if (next == rank) return rank;
    rank = next;
    elements = std::move(grown);
  }
}

}  // namespace

TEST_CASE("hky parameterization") {
  const auto q1 = zoo::hky(0.02, 0.01, 0.005, 0.009, 1.5);
  CHECK(q1(0, 1) == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(q1(0, 2) == 0.02);
  CHECK(q1(0, 3) == 0.02);
  CHECK(q1(1, 0) == doctest::Approx(0.015).epsilon(1e-15));
  CHECK(q1(2, 3) == doctest::Approx(0.0075).epsilon(1e-15));
  CHECK(q1(3, 2) == doctest::Approx(0.0135).epsilon(1e-15));
  CHECK(q1.eigen().colwise().sum().cwiseAbs().maxCoeff() <= 1e-17);

  CHECK(zoo::hky(0, 0, 0, 0, 1.5) == SquareMatrix::zero(4));

  const std::array<double, 4> alpha{0.02, 0.01, 0.005, 0.009};
  const auto f81_like = zoo::hky(alpha[0], alpha[1], alpha[2], alpha[3], 1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(f81_like(i, j) == alpha[static_cast<std::size_t>(i)]);

  CHECK_THROWS_AS(zoo::hky(-0.01, 0.01, 0.01, 0.01, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(zoo::hky(0.01, 0.01, 0.01, 0.01, -1.0), std::invalid_argument);
}

TEST_CASE("property: hky samples satisfy every hky constraint") {
  const auto model = zoo::hky_model();
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = zoo::hky(rng.uniform(0.001, 0.05), rng.uniform(0.001, 0.05),
                            rng.uniform(0.001, 0.05), rng.uniform(0.001, 0.05),
                            rng.uniform(0.5, 2.0));
    for (double r : evaluate_constraints(model, q)) CHECK(std::abs(r) <= 1e-14);
  }
}

TEST_CASE("hky_model") {
  const auto model = zoo::hky_model();
  CHECK(model.n() == 4);
  CHECK(model.constraints().size() == 10);
  for (const auto& c : model.constraints()) CHECK(c.homogeneous());
  const auto m = membership(model, zoo::hky(0.03, 0.01, 0.006, 0.008, 1.4));
  CHECK(m.in_R);
  CHECK(m.in_R_plus);
  const auto out = membership(model, zoo::reference_log_product());
  CHECK_FALSE(out.in_R);
  CHECK_FALSE(out.in_R_plus);
  for (double r : evaluate_constraints(model, SquareMatrix::zero(4))) CHECK(r == 0.0);
}

TEST_CASE("lm88_model") {
  const auto model = zoo::lm88_model();
  CHECK(model.basis().size() == 8);
  CHECK(numerical_rank(model.basis()) == 8);
  CHECK(exact_rank(model.basis()) == 8);
  CHECK(lie_closure(model.basis()).size() == 8);
  CHECK(exact_lie_closure_dim(model.basis()) == 8);

  Rng rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const auto q = zoo::hky(rng.uniform(0, 0.05), rng.uniform(0, 0.05), rng.uniform(0, 0.05),
                            rng.uniform(0, 0.05), rng.uniform(0, 3));
    CHECK(membership(model, q).in_R_plus);
  }

  // The span basis is orthonormal after the deterministic orthonormalization.
  const auto& ortho = model.span_basis();
  REQUIRE(ortho.size() == 8);
  for (std::size_t i = 0; i < ortho.size(); ++i)
    for (std::size_t j = 0; j < ortho.size(); ++j) {
      const double dot = ortho[i].eigen().cwiseProduct(ortho[j].eigen()).sum();
      CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("companion models") {
  CHECK(zoo::jc_model().span_basis().size() == 1);
  CHECK(zoo::k2p_model().span_basis().size() == 2);
  CHECK(zoo::f81_model().span_basis().size() == 4);
  CHECK(exact_lie_closure_dim(zoo::f81_model().basis()) == 4);
  CHECK(lie_closure(zoo::f81_model().basis()).size() == 4);
  CHECK(exact_lie_closure_dim(zoo::k2p_model().basis()) == 2);
  CHECK(exact_lie_closure_dim(zoo::jc_model().basis()) == 1);

  const auto gtr = zoo::gtr_model();
  CHECK_FALSE(gtr.has_basis());
  CHECK(gtr.constraints().size() == 4);
  CHECK(gtr.span_basis().size() == 12);

  // HKY with kappa = 1 is F81.
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const auto q = zoo::hky(rng.uniform(0.001, 0.05), rng.uniform(0.001, 0.05),
                            rng.uniform(0.001, 0.05), rng.uniform(0.001, 0.05), 1.0);
    CHECK(membership(zoo::f81_model(), q).in_R_plus);
  }
}

TEST_CASE("gtr is refuted by an independent witness search") {
  // Oracle: Eigen's Pade exp/log, sampling GTR parameters directly, until a
  // Kolmogorov residual exceeds 1e-5.
  const auto gtr = zoo::gtr_model();
  Rng rng(67);
  bool found = false;
  for (int attempt = 0; attempt < 200 && !found; ++attempt) {
    std::array<double, 6> s{};
    std::array<double, 4> pi{};
    std::array<double, 6> s2{};
    std::array<double, 4> pi2{};
    for (auto& v : s) v = rng.uniform(0.5, 2.0);
    for (auto& v : pi) v = rng.uniform(0.01, 0.3);
    for (auto& v : s2) v = rng.uniform(0.5, 2.0);
    for (auto& v : pi2) v = rng.uniform(0.01, 0.3);
    const Eigen::MatrixXd product =
        test::eigen_exp(zoo::gtr(s, pi).eigen()) * test::eigen_exp(zoo::gtr(s2, pi2).eigen());
    const SquareMatrix log(test::eigen_log(product));
    for (double r : evaluate_constraints(gtr, log)) found = found || std::abs(r) > 1e-5;
  }
  REQUIRE(found);
  const auto report = multiplicative_closure_check(gtr, 50, 42, 1e-8);
  CHECK(report.mult_closed_verdict == Verdict::not_closed);
  CHECK_FALSE(report.witnesses.empty());
}

TEST_CASE("property: zoo generators are stochastic across their ranges") {
  Rng rng(71);
  for (const auto& entry : zoo::entries()) {
    const auto& param = entry.model.parameterization();
    if (!param) continue;
    const auto& ranges = entry.model.parameter_ranges();
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> p;
      for (const auto& r : ranges) p.push_back(trial == 0 ? r.low : trial == 1 ? r.high : rng.uniform(r.low, r.high));
      CHECK(is_stochastic_rate(param->generate(p), 1e-15));
    }
  }
}

TEST_CASE("zoo lookup") {
  for (const auto& name : zoo::names()) {
    const auto model = zoo::by_name(name);
    REQUIRE(model.has_value());
    CHECK(model->name() == name);
  }
  CHECK_FALSE(zoo::by_name("nope").has_value());
  CHECK_FALSE(zoo::builtin_parameterization("nope").has_value());
  for (const auto& entry : zoo::entries()) {
    if (entry.expected_span_dim) {
      CHECK(static_cast<int>(entry.model.span_basis().size()) == *entry.expected_span_dim);
    }
  }
}
