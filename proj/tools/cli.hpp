#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dualpolar::cli {

inline constexpr int kUsageError = 64;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  /// verify: statement; count: object kind.
  std::string target;
  unsigned p = 2;
  int n = 2;
  std::optional<int> n_prime;
  std::optional<int> m;
  std::string mode = "exhaustive";
  std::uint64_t budget = 10'000'000;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Sample mode: distinct images / maps / geodesics to collect.
  std::uint64_t target_count = 1000;
  /// build: directory; verify/count: report file (stdout always gets it too).
  std::string output;
  std::string format = "json";
  bool include_distances = false;
  /// count singular: projective dimension (all dimensions when unset).
  std::optional<int> k;
};

/// Parses argv without the program name. Throws UsageError; returns nullopt
/// after printing help.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Range checks shared by all commands. Throws UsageError.
void validate(RunConfig& config);

nlohmann::json config_to_json(const RunConfig& config);

/// Runs a validated config. Returns the process exit code.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + validate + execute with exit codes 0, 1, 2, 64.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dualpolar::cli
