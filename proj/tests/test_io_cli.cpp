#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "lmc/cli.hpp"
#include "lmc/io.hpp"
#include "lmc/zoo.hpp"
#include "support.hpp"

using namespace lmc;
using nlohmann::json;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "lmcheck");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("matrix json forms") {
  const auto q = zoo::hky(0.02, 0.01, 0.005, 0.009, 1.5);
  const json nested = io::matrix_to_json(q);
  CHECK(nested.size() == 4);
  CHECK(io::matrix_from_json(nested, 4) == q);
  CHECK(io::matrix_from_json(json(q.row_major()), 4) == q);
  CHECK_THROWS_AS(io::matrix_from_json(json::array({1, 2, 3}), 2), ModelError);
  CHECK_THROWS_AS(io::matrix_from_json(json::array({1, 2, 3, "x"}), 2), ModelError);
  CHECK_THROWS_AS(io::matrix_from_json(json("nope"), 2), ModelError);
}

TEST_CASE("model json round trip") {
  for (const auto& entry : zoo::entries()) {
    const json exported = io::model_to_json(entry.model);
    CHECK(exported["convention"] == "column");
    const RateModel back = io::model_from_json(exported);
    CHECK(back.name() == entry.model.name());
    CHECK(back.n() == entry.model.n());
    REQUIRE(back.basis().size() == entry.model.basis().size());
    for (std::size_t k = 0; k < back.basis().size(); ++k) CHECK(back.basis()[k] == entry.model.basis()[k]);
    CHECK(back.constraints().size() == entry.model.constraints().size());
    CHECK(back.samplable() == entry.model.samplable());
    CHECK(io::model_to_json(back) == exported);
    // Same definition, same seeded verdict.
    CHECK(multiplicative_closure_check(back, 10, 5).mult_closed_verdict ==
          multiplicative_closure_check(entry.model, 10, 5).mult_closed_verdict);
  }
}

TEST_CASE("row-convention model files are transposed on load") {
  const auto jc = zoo::jc_model().basis()[0];
  const auto q = zoo::hky(0.02, 0.01, 0.005, 0.009, 1.5);
  const json row_model = {
      {"name", "row"},
      {"n", 4},
      {"convention", "row"},
      {"basis", {q.transposed().row_major(), jc.row_major()}},
      {"constraints", {{{"terms", {{{"coeff", 1.0}, {"monomial", {{1, 2}}}}}}}}},
  };
  CHECK_THROWS_AS(io::model_from_json(row_model), ModelError);

  json consistent = row_model;
  consistent["constraints"] = json::array();
  const RateModel model = io::model_from_json(consistent);
  CHECK(model.basis()[0] == q);
  CHECK(model.basis()[1] == jc);

  // A row-convention q_{12} - q_{13} constraint becomes q_{21} - q_{31}.
  const json constraints_only = {
      {"name", "c"},
      {"n", 3},
      {"convention", "row"},
      {"constraints",
       {{{"terms",
          {{{"coeff", 1.0}, {"monomial", {{1, 2}}}}, {{"coeff", -1.0}, {"monomial", {{1, 3}}}}}}}}},
  };
  const RateModel swapped = io::model_from_json(constraints_only);
  const auto& monomial = swapped.constraints()[0].terms()[0].monomial;
  REQUIRE(monomial.size() == 1);
  CHECK(monomial[0].row == 2);
  CHECK(monomial[0].col == 1);
}

TEST_CASE("model json schema errors") {
  const json good = io::model_to_json(zoo::k2p_model());
  auto without = [&good](const std::string& key) {
    json j = good;
    j.erase(key);
    return j;
  };
  CHECK_THROWS_AS(io::model_from_json(json::array()), ModelError);
  CHECK_THROWS_AS(io::model_from_json(without("name")), ModelError);
  CHECK_THROWS_AS(io::model_from_json(without("n")), ModelError);
  json neither = without("basis");
  neither.erase("constraints");
  CHECK_THROWS_AS(io::model_from_json(neither), ModelError);

  json bad = good;
  bad["convention"] = "diagonal";
  CHECK_THROWS_AS(io::model_from_json(bad), ModelError);
  bad = good;
  bad["parameterization"] = "unknown";
  CHECK_THROWS_AS(io::model_from_json(bad), ModelError);
  bad = good;
  bad["parameter_ranges"] = json::array({json::array({0.1})});
  CHECK_THROWS_AS(io::model_from_json(bad), ModelError);
  bad = good;
  bad["constraints"] = json::array({{{"terms", {{{"coeff", 1.0}, {"monomial", {{1, 9}}}}}}}});
  CHECK_THROWS_AS(io::model_from_json(bad), ModelError);

  std::istringstream garbage("{ not json");
  CHECK_THROWS_AS(io::read_model(garbage), ModelError);
}

TEST_CASE("report json fields") {
  const auto report = multiplicative_closure_check(zoo::hky_model(), 20, 42);
  const json j = io::report_to_json(report);
  for (const char* key : {"model_name", "span_dim", "lie_closure_dim", "ambient_dim",
                          "mult_closed_verdict", "witnesses", "samples_tested", "tolerance"}) {
    CHECK_MESSAGE(j.contains(key), key);
  }
  CHECK(j["mult_closed_verdict"] == "not_closed");
  REQUIRE_FALSE(j["witnesses"].empty());
  const json& w = j["witnesses"][0];
  for (const char* key : {"Q", "Q_prime", "log_product", "residual"}) CHECK_MESSAGE(w.contains(key), key);
  CHECK(io::matrix_from_json(w["log_product"], 4) == report.witnesses[0].log_product);
}

TEST_CASE("cli exit codes follow the verdict") {
  CHECK(invoke({"check", "--model", "hky", "--samples", "30", "--no-timestamp"}).code == cli::kExitNotClosed);
  CHECK(invoke({"check", "--model", "lm88", "--samples", "30"}).code == cli::kExitClosed);
  CHECK(invoke({"check", "--model", "jc", "--samples", "30"}).code == cli::kExitClosed);

  const json k2p_constraints = {
      {"name", "k2p-constraints"},
      {"n", 4},
      {"constraints",
       {{{"terms", {{{"coeff", 1.0}, {"monomial", {{1, 3}}}}, {{"coeff", -1.0}, {"monomial", {{1, 4}}}}}}}}},
      {"parameterization", "k2p"},
      {"parameter_ranges", {{0.001, 0.05}, {0.001, 0.05}}},
  };
  CHECK(invoke({"check", "--model", "-", "--samples", "20"}, k2p_constraints.dump()).code ==
        cli::kExitInconclusive);

  const auto missing = invoke({"check", "--model", "/nonexistent/model.json"});
  CHECK(missing.code == cli::kExitError);
  CHECK(missing.err.find("lmcheck:") == 0);
  CHECK(invoke({"check", "--bogus"}).code == cli::kExitError);
  CHECK(invoke({"bch", "--orders", "1,4"}).code == cli::kExitError);
  CHECK(invoke({}).code == cli::kExitError);
}

TEST_CASE("cli check report") {
  const auto a = invoke({"check", "--model", "hky", "--seed", "42", "--no-timestamp"});
  const auto b = invoke({"check", "--model", "hky", "--seed", "42", "--no-timestamp"});
  CHECK(a.code == cli::kExitNotClosed);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["command"] == "check");
  CHECK_FALSE(j.contains("timestamp"));
  CHECK(j["config"]["seed"] == 42);
  CHECK(j["config"]["samples"] == 100);
  CHECK(j["report"]["mult_closed_verdict"] == "not_closed");
  CHECK(j["report"]["span_dim"] == 8);
  CHECK(j["report"]["lie_closure_dim"] == 8);
  CHECK(j["scaling_closure"]["closed"] == true);

  const auto stamped = invoke({"check", "--model", "jc", "--samples", "5"});
  const json s = json::parse(stamped.out);
  REQUIRE(s.contains("timestamp"));
  CHECK(std::regex_match(s["timestamp"].get<std::string>(),
                         std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));

  const auto other_seed = invoke({"check", "--model", "hky", "--seed", "43", "--no-timestamp"});
  CHECK(other_seed.out != a.out);
}

TEST_CASE("cli export feeds check through stdin") {
  for (const std::string name : {"hky", "lm88", "gtr"}) {
    const auto exported = invoke({"export", "--model", name});
    REQUIRE(exported.code == 0);
    const auto direct = invoke({"check", "--model", name, "--samples", "20", "--no-timestamp"});
    const auto piped =
        invoke({"check", "--model", "-", "--samples", "20", "--no-timestamp"}, exported.out);
    CHECK(piped.code == direct.code);
    CHECK(json::parse(piped.out)["report"]["mult_closed_verdict"] ==
          json::parse(direct.out)["report"]["mult_closed_verdict"]);
  }
  CHECK(invoke({"check", "--model", "-"}, "[]").code == cli::kExitError);
}

TEST_CASE("cli output file") {
  const auto path = std::filesystem::temp_directory_path() / "lmcheck_test_output.json";
  std::filesystem::remove(path);
  const auto result = invoke({"closure", "--model", "k2p", "--output", path.string(), "--no-timestamp"});
  CHECK(result.code == 0);
  CHECK(result.out.empty());
  std::ifstream file(path);
  const json j = json::parse(file);
  CHECK(j["lie_closure_dim"] == 2);
  std::filesystem::remove(path);
}

TEST_CASE("cli closure, bch, sample and repro-paper") {
  const json closure = json::parse(invoke({"closure", "--model", "hky"}).out);
  CHECK(closure["span_dim"] == 8);
  CHECK(closure["lie_closure_dim"] == 8);
  CHECK(closure["basis"].size() == 8);
  CHECK(invoke({"closure", "--model", "-"}, io::model_to_json(RateModel("c", 4, {}, {PolynomialConstraint({term(1.0, {{1, 2}})})})).dump()).code ==
        cli::kExitError);

  const auto bch = invoke({"bch", "--model", "hky", "--orders", "1,2,3"});
  CHECK(bch.code == 0);
  const json sweep = json::parse(bch.out);
  REQUIRE(sweep["slopes"].size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(sweep["slopes"][k].get<double>() - static_cast<double>(k + 2)) <= 0.2);
  }

  const auto s1 = invoke({"sample", "--model", "gtr", "--samples", "3", "--seed", "9", "--no-timestamp"});
  const auto s2 = invoke({"sample", "--model", "gtr", "--samples", "3", "--seed", "9", "--no-timestamp"});
  CHECK(s1.out == s2.out);
  const json samples = json::parse(s1.out)["samples"];
  REQUIRE(samples.size() == 3);
  for (const auto& m : samples) CHECK(is_stochastic_rate(io::matrix_from_json(m, 4), 1e-12));

  const auto repro = invoke({"repro-paper", "--no-timestamp"});
  CHECK(repro.code == 0);
  const json r = json::parse(repro.out);
  CHECK(r["max_deviation"].get<double>() <= 1e-5);
  CHECK(r["kappa_witness"].size() == 4);
  CHECK(r["alpha"][0].get<double>() == doctest::Approx(0.0498348).epsilon(1e-5));
}

TEST_CASE("cli text output uses six significant figures") {
  const auto repro = invoke({"repro-paper", "--format", "text"});
  CHECK(repro.code == 0);
  CHECK(repro.out.find("-0.0571752") != std::string::npos);
  CHECK(repro.out.find("0.0247748") != std::string::npos);
  CHECK(repro.out.find("kappa ratios: 1.44126 1.44837 1.44546 1.45108") != std::string::npos);

  const auto check = invoke({"check", "--model", "hky", "--samples", "20", "--format", "TEXT"});
  CHECK(check.code == cli::kExitNotClosed);
  CHECK(check.out.find("verdict: not_closed") != std::string::npos);
  CHECK(check.out.find("span dimension: 8") != std::string::npos);

  const auto bch = invoke({"bch", "--format", "text"});
  CHECK(bch.out.find("slope") != std::string::npos);
}
