#pragma once

#include <paract/error.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace paract {

/// A scenario or check referenced something that does not exist or is
/// malformed; the message carries the offending field or name.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double defect = 0.0;
  double tolerance = 0.0;
  std::string note;
};

/// Outcome of one scenario run. Serialization to JSON is deterministic for
/// a fixed seed; wall time appears only in the plain-text summary.
struct Report {
  std::string scenario;
  std::string description;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  double wall_ms = 0.0;

  bool passed() const;
  double max_defect() const;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

/// The builtin verification suite: every worked construction and identity
/// the library is expected to reproduce, as named runnable scenarios.
const std::vector<ScenarioInfo>& builtin_scenarios();
bool is_builtin_scenario(std::string_view name);

/// Runs one builtin scenario; randomized checks derive from `seed`, so a
/// fixed seed gives byte-identical reports. Throws ConfigError on an
/// unknown name.
Report run_builtin(std::string_view name, std::uint64_t seed);

/// Runs the whole builtin suite in registry order.
std::vector<Report> run_all(std::uint64_t seed);

std::string to_json(const Report& report);
std::string to_json(std::span<const Report> reports, std::uint64_t seed);

/// Fixed-width table with one line per scenario plus a trailing total.
std::string summary_table(std::span<const Report> reports);

}  // namespace paract
