#include "lmc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "lmc/closure.hpp"
#include "lmc/io.hpp"
#include "lmc/zoo.hpp"

namespace lmc::cli {

using nlohmann::json;

namespace {

constexpr double kReproTolerance = 1e-5;

std::string sig6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string format_matrix(const SquareMatrix& m, const std::string& indent = "  ") {
  std::ostringstream os;
  for (int i = 0; i < m.n(); ++i) {
    os << indent;
    for (int j = 0; j < m.n(); ++j) os << std::setw(14) << sig6(m(i, j));
    os << '\n';
  }
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream os;
  os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

RateModel load_model(const std::string& ref, std::istream& in) {
  if (auto model = zoo::by_name(ref)) return *model;
  if (ref == "-") return io::read_model(in);
  std::ifstream file(ref);
  if (!file) {
    throw ModelError("cannot read model '" + ref + "': not a zoo name or readable file");
  }
  return io::read_model(file);
}

json envelope(const CliConfig& config) {
  json out;
  out["command"] = to_string(config.command);
  out["config"] = config_to_json(config);
  if (config.timestamp) out["timestamp"] = utc_timestamp();
  return out;
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::closed:
      return kExitClosed;
    case Verdict::not_closed:
      return kExitNotClosed;
    case Verdict::inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::check:
      return "check";
    case Command::closure:
      return "closure";
    case Command::bch:
      return "bch";
    case Command::sample:
      return "sample";
    case Command::repro_paper:
      return "repro-paper";
    case Command::export_model:
      return "export";
  }
  return "check";
}

json config_to_json(const CliConfig& config) {
  return {{"command", to_string(config.command)},
          {"model", config.model_ref},
          {"seed", config.seed},
          {"samples", config.samples},
          {"tol", config.tol},
          {"output", config.output},
          {"format", config.format == Format::json ? "json" : "text"},
          {"timestamp", config.timestamp},
          {"chain_length", config.chain_length},
          {"orders", config.orders}};
}

CommandResult cmd_check(const CliConfig& config, std::istream& in) {
  const RateModel model = load_model(config.model_ref, in);
  const ScalingClosure scaling = check_scaling_closure(model, config.samples, config.seed);
  const ClosureReport report =
      multiplicative_closure_check(model, config.samples, config.seed, config.tol);

  CommandResult result;
  result.exit_code = exit_code_for(report.mult_closed_verdict);
  if (config.format == Format::json) {
    json out = envelope(config);
    out["report"] = io::report_to_json(report);
    out["scaling_closure"] = {{"closed", scaling.closed}, {"homogeneous", scaling.homogeneous}};
    result.output = render(out);
    return result;
  }
  std::ostringstream os;
  os << "model: " << report.model_name << '\n'
     << "span dimension: " << report.span_dim << '\n'
     << "Lie closure dimension: " << report.lie_closure_dim << " (ambient " << report.ambient_dim
     << ")\n"
     << "scaling closure: " << (scaling.closed ? "yes" : "no")
     << " (constraints homogeneous: " << (scaling.homogeneous ? "yes" : "no") << ")\n"
     << "verdict: " << to_string(report.mult_closed_verdict) << " (" << report.samples_tested
     << " pairs tested, tol " << sig6(report.tolerance) << ")\n";
  for (std::size_t k = 0; k < report.witnesses.size(); ++k) {
    os << "witness " << k + 1 << ": residual " << sig6(report.witnesses[k].residual) << '\n'
       << format_matrix(report.witnesses[k].log_product);
  }
  result.output = os.str();
  return result;
}

CommandResult cmd_closure(const CliConfig& config, std::istream& in) {
  const RateModel model = load_model(config.model_ref, in);
  if (model.span_basis().empty()) {
    throw ModelError("model '" + model.name() + "' has no span basis to close");
  }
  const auto closure = lie_closure(model.span_basis());

  CommandResult result;
  if (config.format == Format::json) {
    json out = envelope(config);
    out["model_name"] = model.name();
    out["span_dim"] = model.span_basis().size();
    out["lie_closure_dim"] = closure.size();
    json basis = json::array();
    for (const auto& b : closure) basis.push_back(io::matrix_to_json(b));
    out["basis"] = std::move(basis);
    result.output = render(out);
    return result;
  }
  std::ostringstream os;
  os << "model: " << model.name() << '\n'
     << "span dimension: " << model.span_basis().size() << '\n'
     << "Lie closure dimension: " << closure.size() << '\n';
  for (std::size_t k = 0; k < closure.size(); ++k) {
    os << "basis " << k + 1 << ":\n" << format_matrix(closure[k]);
  }
  result.output = os.str();
  return result;
}

CommandResult cmd_bch(const CliConfig& config, std::istream& in) {
  const RateModel model = load_model(config.model_ref, in);
  const SquareMatrix a = sample_stochastic(model, config.seed);
  const SquareMatrix b = sample_stochastic(model, config.seed + 1);
  const auto times = default_bch_times();
  const BchSweep sweep = bch_error_sweep(a, b, config.orders, times);

  CommandResult result;
  if (config.format == Format::json) {
    json out = envelope(config);
    out["model_name"] = model.name();
    out["A"] = io::matrix_to_json(a);
    out["B"] = io::matrix_to_json(b);
    out["times"] = sweep.times;
    out["orders"] = sweep.orders;
    out["errors"] = sweep.errors;
    out["slopes"] = sweep.slopes;
    result.output = render(out);
    return result;
  }
  std::ostringstream os;
  os << std::setw(12) << "t";
  for (int order : sweep.orders) os << std::setw(14) << ("order " + std::to_string(order));
  os << '\n';
  for (std::size_t m = 0; m < sweep.times.size(); ++m) {
    os << std::setw(12) << sig6(sweep.times[m]);
    for (const auto& errors : sweep.errors) os << std::setw(14) << sig6(errors[m]);
    os << '\n';
  }
  os << std::setw(12) << "slope";
  for (double slope : sweep.slopes) os << std::setw(14) << sig6(slope);
  os << '\n';
  result.output = os.str();
  return result;
}

CommandResult cmd_sample(const CliConfig& config, std::istream& in) {
  const RateModel model = load_model(config.model_ref, in);
  std::vector<SquareMatrix> samples;
  for (int k = 0; k < config.samples; ++k) {
    samples.push_back(sample_stochastic(model, config.seed + static_cast<std::uint64_t>(k)));
  }
  CommandResult result;
  if (config.format == Format::json) {
    json out = envelope(config);
    out["model_name"] = model.name();
    json list = json::array();
    for (const auto& s : samples) list.push_back(io::matrix_to_json(s));
    out["samples"] = std::move(list);
    result.output = render(out);
    return result;
  }
  std::ostringstream os;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    os << "sample " << k + 1 << ":\n" << format_matrix(samples[k]);
  }
  result.output = os.str();
  return result;
}

CommandResult cmd_repro_paper(const CliConfig& config) {
  const auto [q1, q2] = zoo::reference_hky_pair();
  const SquareMatrix computed = log_product(q1, q2);
  const SquareMatrix expected = zoo::reference_log_product();
  const double deviation = (computed.eigen() - expected.eigen()).cwiseAbs().maxCoeff();
  const auto kappa = kappa_witness(computed);
  // Transversion entries carry the alpha parameters directly.
  const std::array<double, 4> alpha{computed(0, 2), computed(1, 2), computed(2, 0), computed(3, 0)};

  CommandResult result;
  result.exit_code = deviation <= kReproTolerance ? kExitClosed : kExitError;
  if (config.format == Format::json) {
    json out = envelope(config);
    out["Q1"] = io::matrix_to_json(q1);
    out["Q2"] = io::matrix_to_json(q2);
    out["computed"] = io::matrix_to_json(computed);
    out["expected"] = io::matrix_to_json(expected);
    out["max_deviation"] = deviation;
    out["deviation_tolerance"] = kReproTolerance;
    out["kappa_witness"] = kappa;
    out["alpha"] = alpha;
    result.output = render(out);
    return result;
  }
  std::ostringstream os;
  os << "log(e^Q1 e^Q2), computed:\n"
     << format_matrix(computed) << "reference:\n"
     << format_matrix(expected) << "max entrywise deviation: " << sig6(deviation) << " (limit "
     << sig6(kReproTolerance) << ")\n"
     << "alpha (A, G, C, T):";
  for (double a : alpha) os << ' ' << sig6(a);
  os << "\nkappa ratios:";
  for (double k : kappa) os << ' ' << sig6(k);
  os << '\n';
  result.output = os.str();
  return result;
}

CommandResult cmd_export(const CliConfig& config, std::istream& in) {
  const RateModel model = load_model(config.model_ref, in);
  return {kExitClosed, render(io::model_to_json(model))};
}

CommandResult execute(const CliConfig& config, std::istream& in) {
  switch (config.command) {
    case Command::check:
      return cmd_check(config, in);
    case Command::closure:
      return cmd_closure(config, in);
    case Command::bch:
      return cmd_bch(config, in);
    case Command::sample:
      return cmd_sample(config, in);
    case Command::repro_paper:
      return cmd_repro_paper(config);
    case Command::export_model:
      return cmd_export(config, in);
  }
  throw std::logic_error("unknown command");
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiplicative-closure audits for continuous-time Markov models", "lmcheck"};
  app.require_subcommand(1);

  CliConfig config;
  const std::map<std::string, Format> formats{{"json", Format::json}, {"text", Format::text}};
  bool no_timestamp = false;

  const std::vector<std::pair<Command, std::string>> commands{
      {Command::check, "Audit scaling closure, multiplicative closure and the Lie criterion"},
      {Command::closure, "Print the Lie closure of the model's span"},
      {Command::bch, "Compare truncated BCH series against the numerical log-product"},
      {Command::sample, "Emit seeded rate-matrix samples"},
      {Command::repro_paper, "Reproduce the reference HKY log-product example"},
      {Command::export_model, "Write the model in the JSON model file format"},
  };
  std::map<CLI::App*, Command> by_app;
  for (const auto& [command, description] : commands) {
    CLI::App* sub = app.add_subcommand(to_string(command), description);
    by_app[sub] = command;
    sub->add_option("--model", config.model_ref, "Zoo name, model file, or - for stdin");
    sub->add_option("--seed", config.seed, "Sampler seed");
    sub->add_option("--samples", config.samples, "Number of samples")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", config.tol, "Membership tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--output", config.output, "Output file (default: stdout)");
    sub->add_option("--format", config.format, "json or text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp from reports");
    sub->add_option("--chain-length", config.chain_length, "Maximum product-chain length")
        ->check(CLI::PositiveNumber);
    sub->add_option("--orders", config.orders, "BCH orders, comma separated")
        ->delimiter(',')
        ->check(CLI::Range(1, 3));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }
  for (const auto& [sub, command] : by_app) {
    if (sub->parsed()) config.command = command;
  }
  config.timestamp = !no_timestamp;

  CommandResult result;
  try {
    result = execute(config, in);
  } catch (const std::exception& e) {
    err << "lmcheck: " << e.what() << '\n';
    return kExitError;
  }

  if (config.output.empty()) {
    out << result.output;
  } else {
    std::ofstream file(config.output);
    if (!file) {
      err << "lmcheck: cannot write '" << config.output << "'\n";
      return kExitError;
    }
    file << result.output;
  }
  return result.exit_code;
}

}  // namespace lmc::cli
