#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dualpolar {

enum class Status { Verified, Counterexample, BudgetExhausted };

std::string to_string(Status s);

/// Exit code carried by the CLI: 0 verified, 1 counterexample, 2 incomplete.
int exit_code(Status s);

/// Outcome of one verification run. Violations name concrete witnesses.
struct VerificationReport {
  std::string statement;
  unsigned p = 0;
  int n = 0;
  int m = 0;
  std::optional<int> n_prime;
  std::string mode = "exhaustive";
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::int64_t> counts;
  std::vector<std::string> violations;
  std::uint64_t violation_count = 0;
  /// False when a budget cut the run short of its stated goal.
  bool complete = true;
  double elapsed_seconds = 0.0;

  /// Records a violation; keeps the first kMaxStored witnesses verbatim.
  void add_violation(std::string what);
  void merge_violations(const std::vector<std::string>& extra, const std::string& prefix = "");
  Status status() const;

  static constexpr std::size_t kMaxStored = 64;
};

nlohmann::json to_json(const VerificationReport& report);

/// Result of a checked construction: the value when every postcondition
/// held, plus the violated postconditions otherwise.
template <class T>
struct Verified {
  std::optional<T> value;
  std::vector<std::string> violations;

  bool ok() const { return value.has_value() && violations.empty(); }
};

}  // namespace dualpolar
