#pragma once

// JSON forms of models and closure reports.
//
// Model file:
//   { "name": str, "n": int, "convention": "column" | "row",
//     "basis": [[row-major reals], ...],
//     "constraints": [ { "terms": [ { "coeff": real, "monomial": [[i, j], ...] } ] } ],
//     "parameterization": builtin name or null,
//     "parameter_ranges": [[low, high], ...] }
// Indices are 1-based. A "row" model is transposed on load; exports are
// always written in the column convention.

#include <iosfwd>

#include "json.hpp"
#include "lmc/closure.hpp"
#include "lmc/model.hpp"

namespace lmc::io {

nlohmann::json matrix_to_json(const SquareMatrix& m);
SquareMatrix matrix_from_json(const nlohmann::json& j, int n);

nlohmann::json model_to_json(const RateModel& model);
/// Throws ModelError on schema violations.
RateModel model_from_json(const nlohmann::json& j);
RateModel read_model(std::istream& in);

nlohmann::json report_to_json(const ClosureReport& report);

}  // namespace lmc::io
