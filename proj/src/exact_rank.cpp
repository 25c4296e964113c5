#include "lmc/exact_rank.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

namespace lmc {

Rational exact_rational(double value) {
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an integer for every finite double.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational result(scaled);
  boost::multiprecision::cpp_int power = 1;
  power <<= std::abs(exponent);
  if (exponent >= 0) {
    result *= Rational(power);
  } else {
    result /= Rational(power);
  }
  return result;
}

int exact_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  int rank = 0;
  for (std::size_t col = 0; col < cols && static_cast<std::size_t>(rank) < rows.size(); ++col) {
    std::size_t pivot = static_cast<std::size_t>(rank);
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[static_cast<std::size_t>(rank)]);
    const auto& pivot_row = rows[static_cast<std::size_t>(rank)];
    for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const Rational factor = rows[r][col] / pivot_row[col];
      for (std::size_t c = col; c < cols; ++c) rows[r][c] -= factor * pivot_row[c];
    }
    ++rank;
  }
  return rank;
}

int exact_rank(std::span<const SquareMatrix> vectors) {
  std::vector<std::vector<Rational>> rows;
  rows.reserve(vectors.size());
  for (const auto& m : vectors) {
    if (m.n() != vectors.front().n()) {
      throw DimensionError("matrices in a span must share one order");
    }
    std::vector<Rational> row;
    for (double v : m.row_major()) row.push_back(exact_rational(v));
    rows.push_back(std::move(row));
  }
  return exact_rank(std::move(rows));
}

}  // namespace lmc
