#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mfa::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  double statistic = 0.0;
  double bound = 0.0;
  std::string detail;

  nlohmann::json to_json() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  int n = 24;
  double tol = 1e-10;
};

/// Checks run by a bare `verify`.
std::vector<std::string> default_checks();
/// Every known check name, including ones only run on request.
std::vector<std::string> all_checks();

CheckResult run_check(const std::string& name, const VerifyOptions& options);

}  // namespace mfa::cli
