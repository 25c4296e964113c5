#pragma once

// Built-in nucleotide models. States are ordered A, G, C, T everywhere and
// entry (i, j) is the rate from state j to state i (columns sum to zero).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmc/model.hpp"

namespace lmc::zoo {

enum class Provenance { paper, standard_literature };

struct ZooEntry {
  RateModel model;
  std::optional<int> expected_span_dim;
  std::optional<bool> expected_closed;
  Provenance provenance;
};

/// HKY rate matrix. Off-diagonal row i holds alpha_i, with the transition
/// (A<->G, C<->T) entry multiplied by kappa.
SquareMatrix hky(double alpha_a, double alpha_g, double alpha_c, double alpha_t, double kappa);

/// GTR rate matrix: q_ij = s_ij * pi_i. Exchangeabilities are ordered
/// AG, AC, AT, GC, GT, CT.
SquareMatrix gtr(std::span<const double> exchangeabilities, std::span<const double> frequencies);

/// Four linear pattern constraints, then every pairwise equality of the
/// four implied transition/transversion ratios.
RateModel hky_model();
/// Lie-Markov model 8.8: eight free off-diagonal parameters.
RateModel lm88_model();
RateModel jc_model();
RateModel f81_model();
RateModel k2p_model();
/// Time-reversible family, defined by Kolmogorov cycle constraints and a
/// parameterization; no declared span basis.
RateModel gtr_model();

/// Builtin parameterization by name ("hky", "gtr", "jc", "f81", "k2p").
std::optional<Parameterization> builtin_parameterization(const std::string& name);

/// Model by zoo name ("hky", "lm88", "jc", "f81", "k2p", "gtr").
std::optional<RateModel> by_name(const std::string& name);

std::vector<std::string> names();

/// HKY pair (.02, .01, .005, .009; 1.5) and (.03, .01, .006, .008; 1.4).
std::pair<SquareMatrix, SquareMatrix> reference_hky_pair();
/// Reference log(e^{Q1} e^{Q2}) for reference_hky_pair(), 6 significant figures.
SquareMatrix reference_log_product();
std::vector<ZooEntry> entries();

}  // namespace lmc::zoo
