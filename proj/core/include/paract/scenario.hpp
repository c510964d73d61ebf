#pragma once

#include <paract/actions.hpp>
#include <paract/expr.hpp>
#include <paract/functions.hpp>
#include <paract/geometry.hpp>
#include <paract/harness.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace paract {

/// One expectation block from a scenario file.
struct ScenarioCheck {
  std::string kind;
  std::vector<double> parameter_values;
  std::optional<double> tolerance;
  std::optional<double> witness;
};

/// A scenario file: sectioned `key = value` text declaring one optional
/// [action], one [function] (scalar `u` or parametric `v1`/`v2`, plus an
/// optional auxiliary map `lambda`), and any number of [check] blocks.
/// Unknown sections and keys are errors.
struct FileScenario {
  std::string name;
  std::optional<GroupAction> action;
  std::optional<OpenBox> domain;
  std::optional<Expr> scalar_body;      // in "x"
  std::optional<Expr> parametric_first; // in "p"
  std::optional<Expr> parametric_second;
  std::optional<Expr> lambda;           // in the function's own variable

  bool has_scalar() const { return scalar_body.has_value(); }
  bool has_parametric() const { return parametric_first.has_value(); }

  std::vector<ScenarioCheck> checks;
};

FileScenario parse_scenario(std::string_view text, const std::string& origin);
FileScenario load_scenario(const std::string& path);

/// Builds the concrete objects with the action parameter substituted by the
/// supplied values. Throws ConfigError naming any parameter that stays
/// unbound.
ScalarFunction scenario_scalar(const FileScenario& s,
                               const std::map<std::string, double>& parameters);
ParametricFunction scenario_parametric(const FileScenario& s,
                                       const std::map<std::string, double>& parameters);
GroupElement scenario_element(const FileScenario& s,
                              const std::map<std::string, double>& parameters);

struct RunOptions {
  int resolution = 1024;
  std::uint64_t seed = 0;
};

/// Executes the scenario's [check] blocks deterministically and reports one
/// CheckResult per declared expectation (and parameter value).
Report run_scenario(const FileScenario& s, const RunOptions& options = {});

}  // namespace paract
