#pragma once

// Exact-rational row reduction, used as a cross-check oracle for the
// floating-point rank. Every finite double is a dyadic rational, so the
// conversion below is exact and the computed rank is that of the inputs
// exactly as stored.

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <vector>

#include "lmc/linalg.hpp"

namespace lmc {

using Rational = boost::multiprecision::cpp_rational;

/// Exact rational value of a finite double.
Rational exact_rational(double value);

/// Rank of a list of rational row vectors by Gaussian elimination.
int exact_rank(std::vector<std::vector<Rational>> rows);

/// Rank of the matrices viewed as vectors in Q^{n*n}.
int exact_rank(std::span<const SquareMatrix> vectors);

}  // namespace lmc
