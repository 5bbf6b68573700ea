#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forge/model.hpp"

namespace forge {

// Canonical order of every check the orchestrator knows.
const std::vector<std::string>& check_names();

struct CheckResult {
  std::string name;
  Verdict verdict;
};

struct CheckReport {
  std::string model;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0.0;
  std::vector<CheckResult> checks;

  bool any_failed() const;
  const CheckResult* find(const std::string& name) const;
  std::vector<std::string> names() const;
};

class UnknownCheck : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Empty selection runs everything. Results are listed in canonical order.
CheckReport run_checks(const AlgebroidModel& model, const std::vector<std::string>& selection = {});

std::string report_json(const CheckReport& r);
std::string report_text(const CheckReport& r);

// Comma-separated list, validated against check_names().
std::vector<std::string> parse_check_list(const std::string& list);

}  // namespace forge
