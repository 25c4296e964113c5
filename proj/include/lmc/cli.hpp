#pragma once

// Command-line front end. Exit codes: 0 closed / success, 1 error,
// 2 not_closed, 3 inconclusive.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace lmc::cli {

enum class Command { check, closure, bch, sample, repro_paper, export_model };
enum class Format { json, text };

struct CliConfig {
  Command command = Command::check;
  std::string model_ref = "hky";  // zoo name, file path, or "-" for stdin
  std::uint64_t seed = 42;
  int samples = 100;
  double tol = 1e-8;
  std::string output;  // empty: standard output
  Format format = Format::json;
  bool timestamp = true;
  int chain_length = 3;
  std::vector<int> orders{1, 2, 3};
};

inline constexpr int kExitClosed = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotClosed = 2;
inline constexpr int kExitInconclusive = 3;

std::string to_string(Command c);
nlohmann::json config_to_json(const CliConfig& config);

struct CommandResult {
  int exit_code = 0;
  std::string output;  // rendered report
};

/// Runs one command. `in` supplies the model when model_ref is "-".
/// Throws on load or computation failures; run() maps those to exit 1.
CommandResult execute(const CliConfig& config, std::istream& in);

CommandResult cmd_check(const CliConfig& config, std::istream& in);
CommandResult cmd_closure(const CliConfig& config, std::istream& in);
CommandResult cmd_bch(const CliConfig& config, std::istream& in);
CommandResult cmd_sample(const CliConfig& config, std::istream& in);
CommandResult cmd_repro_paper(const CliConfig& config);
CommandResult cmd_export(const CliConfig& config, std::istream& in);

/// Parses argv, runs the command and writes the report to the configured
/// destination. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lmc::cli
