#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "capflow/sphere.hpp"

namespace capflow::cli {

enum class Command { Solve, Density, Capacity, FfuncSweep, Verify };
enum class Format { Csv, Json };

struct CliConfig {
  Command command = Command::Solve;
  int d = 3;
  std::string field;  // empty: zero, or custom when a field file is given
  std::optional<double> q;
  std::optional<std::string> field_file;
  std::optional<double> alpha;  // radians after parsing
  Pole pole = Pole::South;
  int points = 100;
  std::optional<double> tol;
  std::optional<Format> format;  // default: json for solve/verify, csv otherwise
  std::optional<std::string> output;
  std::optional<std::string> report;
};

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kConfigError = 2, kNonConvergence = 3 };

/// Parses argv into `config`. Returns an exit code when the process should stop
/// here (help, or a usage error already reported on `err`).
std::optional<int> parse_cli(int argc, const char* const* argv, CliConfig& config, std::ostream& out,
                             std::ostream& err);

/// Executes a parsed configuration and returns the process exit code.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace capflow::cli
