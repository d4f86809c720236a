#include "dualpolar/report.hpp"

namespace dualpolar {

std::string to_string(Status s) {
  switch (s) {
    case Status::Verified:
      return "verified";
    case Status::Counterexample:
      return "counterexample";
    case Status::BudgetExhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

int exit_code(Status s) {
  switch (s) {
    case Status::Verified:
      return 0;
    case Status::Counterexample:
      return 1;
    case Status::BudgetExhausted:
      return 2;
  }
  return 1;
}

void VerificationReport::add_violation(std::string what) {
  ++violation_count;
  if (violations.size() < kMaxStored) violations.push_back(std::move(what));
}

void VerificationReport::merge_violations(const std::vector<std::string>& extra, const std::string& prefix) {
  for (const auto& v : extra) add_violation(prefix + v);
}

Status VerificationReport::status() const {
  if (violation_count > 0) return Status::Counterexample;
  if (!complete) return Status::BudgetExhausted;
  return Status::Verified;
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["statement"] = report.statement;
  nlohmann::json instance{{"p", report.p}, {"n", report.n}, {"m", report.m}};
  if (report.n_prime) instance["n_prime"] = *report.n_prime;
  j["instance"] = std::move(instance);
  j["mode"] = report.mode;
  j["budget"] = report.budget;
  j["seed"] = report.seed;
  j["counts"] = report.counts;
  j["violations"] = report.violations;
  j["violation_count"] = report.violation_count;
  j["complete"] = report.complete;
  j["status"] = to_string(report.status());
  j["elapsed"] = report.elapsed_seconds;
  return j;
}

}  // namespace dualpolar
