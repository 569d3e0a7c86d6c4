#pragma once

// The acceptance suite: eleven exact or property checks, each with a
// runtime limit.

#include <cstdint>
#include <string>
#include <vector>

namespace nterm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool correct = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;

  bool passed() const { return correct && seconds <= limit_seconds; }
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

// "PASS  3 hr-identity  (0.004 s / 1 s)  detail"
std::string format_result(const CriterionResult& result);

}  // namespace nterm
