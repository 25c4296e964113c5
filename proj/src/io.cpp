#include "lmc/io.hpp"

#include <istream>
#include <string>

#include "lmc/zoo.hpp"

namespace lmc::io {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ModelError("model file: " + message);
}

}  // namespace

json matrix_to_json(const SquareMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.n(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

SquareMatrix matrix_from_json(const json& j, int n) {
  require(j.is_array(), "matrix must be an array");
  std::vector<double> flat;
  for (const auto& item : j) {
    if (item.is_array()) {
      for (const auto& v : item) {
        require(v.is_number(), "matrix entries must be numbers");
        flat.push_back(v.get<double>());
      }
    } else {
      require(item.is_number(), "matrix entries must be numbers");
      flat.push_back(item.get<double>());
    }
  }
  require(flat.size() == static_cast<std::size_t>(n * n),
          "matrix needs " + std::to_string(n * n) + " entries");
  return SquareMatrix::from_row_major(n, flat);
}

json model_to_json(const RateModel& model) {
  json out;
  out["name"] = model.name();
  out["n"] = model.n();
  out["convention"] = "column";
  json basis = json::array();
  for (const auto& b : model.basis()) basis.push_back(b.row_major());
  out["basis"] = std::move(basis);
  json constraints = json::array();
  for (const auto& c : model.constraints()) {
    json terms = json::array();
    for (const auto& t : c.terms()) {
      json monomial = json::array();
      for (const auto& p : t.monomial) monomial.push_back({p.row, p.col});
      terms.push_back({{"coeff", t.coeff}, {"monomial", std::move(monomial)}});
    }
    constraints.push_back({{"terms", std::move(terms)}});
  }
  out["constraints"] = std::move(constraints);
  out["parameterization"] =
      model.parameterization() ? json(model.parameterization()->name) : json(nullptr);
  json ranges = json::array();
  for (const auto& r : model.parameter_ranges()) ranges.push_back({r.low, r.high});
  out["parameter_ranges"] = std::move(ranges);
  return out;
}

RateModel model_from_json(const json& j) {
  require(j.is_object(), "top level must be an object");
  require(j.contains("name") && j["name"].is_string(), "\"name\" must be a string");
  require(j.contains("n") && j["n"].is_number_integer(), "\"n\" must be an integer");
  const auto name = j["name"].get<std::string>();
  const int n = j["n"].get<int>();
  require(n >= 2, "\"n\" must be at least 2");

  const std::string convention = j.value("convention", "column");
  require(convention == "column" || convention == "row",
          "\"convention\" must be \"column\" or \"row\"");
  const bool transpose = convention == "row";

  const bool has_basis = j.contains("basis") && !j["basis"].is_null();
  const bool has_constraints = j.contains("constraints") && !j["constraints"].is_null();
  require(has_basis || has_constraints, "either \"basis\" or \"constraints\" must be present");

  std::vector<SquareMatrix> basis;
  if (has_basis) {
    require(j["basis"].is_array(), "\"basis\" must be an array");
    for (const auto& b : j["basis"]) {
      SquareMatrix m = matrix_from_json(b, n);
      basis.push_back(transpose ? m.transposed() : m);
    }
  }

  std::vector<PolynomialConstraint> constraints;
  if (has_constraints) {
    require(j["constraints"].is_array(), "\"constraints\" must be an array");
    for (const auto& c : j["constraints"]) {
      require(c.is_object() && c.contains("terms") && c["terms"].is_array(),
              "each constraint needs a \"terms\" array");
      std::vector<Term> terms;
      for (const auto& t : c["terms"]) {
        require(t.contains("coeff") && t["coeff"].is_number(), "term needs a numeric \"coeff\"");
        Term parsed{t["coeff"].get<double>(), {}};
        if (t.contains("monomial")) {
          require(t["monomial"].is_array(), "\"monomial\" must be an array of [i, j] pairs");
          for (const auto& p : t["monomial"]) {
            require(p.is_array() && p.size() == 2 && p[0].is_number_integer() &&
                        p[1].is_number_integer(),
                    "monomial entries must be [i, j] integer pairs");
            IndexPair pair{p[0].get<int>(), p[1].get<int>()};
            if (transpose) std::swap(pair.row, pair.col);
            require(pair.row >= 1 && pair.col >= 1 && pair.row <= n && pair.col <= n,
                    "index pair out of range");
            parsed.monomial.push_back(pair);
          }
        }
        terms.push_back(std::move(parsed));
      }
      constraints.emplace_back(std::move(terms));
    }
  }

  std::optional<Parameterization> parameterization;
  if (j.contains("parameterization") && !j["parameterization"].is_null()) {
    require(j["parameterization"].is_string(), "\"parameterization\" must be a string or null");
    const auto param_name = j["parameterization"].get<std::string>();
    parameterization = zoo::builtin_parameterization(param_name);
    require(parameterization.has_value(), "unknown parameterization '" + param_name + "'");
  }

  std::vector<ParameterRange> ranges;
  if (j.contains("parameter_ranges") && !j["parameter_ranges"].is_null()) {
    require(j["parameter_ranges"].is_array(), "\"parameter_ranges\" must be an array");
    for (const auto& r : j["parameter_ranges"]) {
      require(r.is_array() && r.size() == 2 && r[0].is_number() && r[1].is_number(),
              "each parameter range must be [low, high]");
      ranges.push_back({r[0].get<double>(), r[1].get<double>()});
    }
  }

  return RateModel(name, n, std::move(basis), std::move(constraints), std::move(parameterization),
                   std::move(ranges));
}

RateModel read_model(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model file: invalid JSON: ") + e.what());
  }
  return model_from_json(j);
}

json report_to_json(const ClosureReport& report) {
  json witnesses = json::array();
  for (const auto& w : report.witnesses) {
    witnesses.push_back({{"Q", matrix_to_json(w.q)},
                         {"Q_prime", matrix_to_json(w.q_prime)},
                         {"log_product", matrix_to_json(w.log_product)},
                         {"residual", w.residual}});
  }
  return {{"model_name", report.model_name},
          {"span_dim", report.span_dim},
          {"lie_closure_dim", report.lie_closure_dim},
          {"ambient_dim", report.ambient_dim},
          {"mult_closed_verdict", to_string(report.mult_closed_verdict)},
          {"witnesses", std::move(witnesses)},
          {"samples_tested", report.samples_tested},
          {"tolerance", report.tolerance}};
}

}  // namespace lmc::io
