#include <paract/scenario.hpp>

#include <paract/analysis.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace paract {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

double parse_real(std::string_view text, const std::string& where) {
  const std::string_view trimmed = trim(text);
  double value = 0.0;
  const char* first = trimmed.data();
  const char* last = trimmed.data() + trimmed.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(where + ": expected a real number, got '" + std::string(trimmed) + "'");
  return value;
}

std::vector<double> parse_real_list(std::string_view text, const std::string& where) {
  std::vector<double> values;
  std::size_t start = 0;
  const std::string source(text);
  while (start <= source.size()) {
    const std::size_t comma = source.find(',', start);
    const std::string_view piece =
        comma == std::string::npos
            ? std::string_view(source).substr(start)
            : std::string_view(source).substr(start, comma - start);
    values.push_back(parse_real(piece, where));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

// Domains are written "(lo, hi)".
OpenBox parse_domain(std::string_view text, const std::string& where) {
  std::string_view body = trim(text);
  if (body.size() < 2 || body.front() != '(' || body.back() != ')')
    throw ConfigError(where + ": expected a domain of the form (lo, hi)");
  body.remove_prefix(1);
  body.remove_suffix(1);
  const std::size_t comma = body.find(',');
  if (comma == std::string_view::npos)
    throw ConfigError(where + ": expected a domain of the form (lo, hi)");
  const double lo = parse_real(body.substr(0, comma), where);
  const double hi = parse_real(body.substr(comma + 1), where);
  if (!(lo < hi)) throw ConfigError(where + ": domain requires lo < hi");
  return OpenBox::interval(lo, hi);
}

struct RawSection {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> entries;  // key, value
  std::vector<int> entry_lines;
};

std::vector<RawSection> split_sections(std::string_view text, const std::string& origin) {
  std::vector<RawSection> sections;
  std::istringstream stream{std::string(text)};
  std::string raw_line;
  int line_number = 0;
  while (std::getline(stream, raw_line)) {
    ++line_number;
    std::string_view line = raw_line;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(line_number) +
                          ": malformed section header");
      sections.push_back(
          {std::string(trim(line.substr(1, line.size() - 2))), line_number, {}, {}});
      continue;
    }
    if (sections.empty())
      throw ConfigError(origin + ":" + std::to_string(line_number) +
                        ": key outside of any [section]");
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(origin + ":" + std::to_string(line_number) +
                        ": expected 'key = value'");
    sections.back().entries.emplace_back(std::string(trim(line.substr(0, eq))),
                                         std::string(trim(line.substr(eq + 1))));
    sections.back().entry_lines.push_back(line_number);
  }
  return sections;
}

const std::set<std::string> kCheckKinds = {"invertible",       "not-invertible",
                                           "not-graph",        "inconclusive",
                                           "identity-at-zero", "acts-totally"};

}  // namespace

FileScenario parse_scenario(std::string_view text, const std::string& origin) {
  FileScenario scenario;
  scenario.name = origin;

  struct Pending {
    std::map<std::string, std::string> action;
    std::map<std::string, std::string> function;
  } pending;
  bool saw_action = false;
  bool saw_function = false;

  for (const RawSection& section : split_sections(text, origin)) {
    const std::string where = origin + ": [" + section.name + "]";
    if (section.name == "action") {
      if (saw_action) throw ConfigError(where + ": duplicate section");
      saw_action = true;
      for (std::size_t i = 0; i < section.entries.size(); ++i) {
        const auto& [key, value] = section.entries[i];
        if (key != "name" && key != "param" && key != "x_tilde" && key != "u_tilde" &&
            key != "identity")
          throw ConfigError(where + ": unknown key '" + key + "' (line " +
                            std::to_string(section.entry_lines[i]) + ")");
        if (!pending.action.emplace(key, value).second)
          throw ConfigError(where + ": duplicate key '" + key + "'");
      }
    } else if (section.name == "function") {
      if (saw_function) throw ConfigError(where + ": duplicate section");
      saw_function = true;
      for (std::size_t i = 0; i < section.entries.size(); ++i) {
        const auto& [key, value] = section.entries[i];
        if (key != "domain" && key != "u" && key != "v1" && key != "v2" && key != "lambda")
          throw ConfigError(where + ": unknown key '" + key + "' (line " +
                            std::to_string(section.entry_lines[i]) + ")");
        if (!pending.function.emplace(key, value).second)
          throw ConfigError(where + ": duplicate key '" + key + "'");
      }
    } else if (section.name == "check") {
      ScenarioCheck check;
      for (std::size_t i = 0; i < section.entries.size(); ++i) {
        const auto& [key, value] = section.entries[i];
        const std::string entry_where =
            where + " (line " + std::to_string(section.entry_lines[i]) + ")";
        if (key == "kind") {
          if (kCheckKinds.count(value) == 0)
            throw ConfigError(entry_where + ": unknown check kind '" + value + "'");
          check.kind = value;
        } else if (key == "param") {
          check.parameter_values = parse_real_list(value, entry_where);
        } else if (key == "tolerance") {
          check.tolerance = parse_real(value, entry_where);
        } else if (key == "witness") {
          check.witness = parse_real(value, entry_where);
        } else {
          throw ConfigError(entry_where + ": unknown key '" + key + "'");
        }
      }
      if (check.kind.empty()) throw ConfigError(where + ": check requires a 'kind'");
      scenario.checks.push_back(std::move(check));
    } else {
      throw ConfigError(origin + ":" + std::to_string(section.line) +
                        ": unknown section '[" + section.name + "]'");
    }
  }

  // Materialize the action.
  if (saw_action) {
    const std::string where = origin + ": [action]";
    for (const char* required : {"param", "x_tilde", "u_tilde"}) {
      if (pending.action.count(required) == 0)
        throw ConfigError(where + ": missing key '" + std::string(required) + "'");
    }
    GroupAction action;
    action.name = pending.action.count("name") ? pending.action["name"] : origin;
    action.parameter = pending.action["param"];
    action.variables = {"x"};
    action.dependent = "u";
    SymbolTable symbols;
    symbols.variables = {"x", "u"};
    symbols.parameters = {action.parameter};
    try {
      action.g1 = {parse(pending.action["x_tilde"], symbols)};
      action.g2 = parse(pending.action["u_tilde"], symbols);
    } catch (const SyntaxError& error) {
      throw ConfigError(where + ": " + error.what());
    }
    action.identity_value = pending.action.count("identity")
                                ? parse_real(pending.action["identity"], where)
                                : 0.0;
    scenario.action = std::move(action);
  }

  // Materialize the function.
  if (saw_function) {
    const std::string where = origin + ": [function]";
    if (pending.function.count("domain") == 0)
      throw ConfigError(where + ": missing key 'domain'");
    scenario.domain = parse_domain(pending.function["domain"], where);

    const bool has_u = pending.function.count("u") != 0;
    const bool has_v1 = pending.function.count("v1") != 0;
    const bool has_v2 = pending.function.count("v2") != 0;
    if (has_u == (has_v1 || has_v2))
      throw ConfigError(where + ": declare either 'u' or both 'v1' and 'v2'");
    if (has_v1 != has_v2)
      throw ConfigError(where + ": 'v1' and 'v2' must be declared together");

    SymbolTable symbols;
    symbols.variables = {has_u ? "x" : "p"};
    if (scenario.action) symbols.parameters = {scenario.action->parameter};
    try {
      if (has_u) {
        scenario.scalar_body = parse(pending.function["u"], symbols);
      } else {
        scenario.parametric_first = parse(pending.function["v1"], symbols);
        scenario.parametric_second = parse(pending.function["v2"], symbols);
      }
      if (pending.function.count("lambda"))
        scenario.lambda = parse(pending.function["lambda"], symbols);
    } catch (const SyntaxError& error) {
      throw ConfigError(where + ": " + error.what());
    }
  }

  return scenario;
}

FileScenario load_scenario(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse_scenario(buffer.str(), path);
}

namespace {

Expr close_over(const Expr& body, const std::map<std::string, double>& parameters,
                const std::string& variable, const std::string& where) {
  std::map<std::string, Expr> substitution;
  for (const auto& [name, value] : parameters)
    substitution.emplace(name, Expr::constant(value));
  Expr closed = body.substitute(substitution);
  for (const std::string& symbol : closed.free_symbols()) {
    if (symbol != variable)
      throw ConfigError(where + ": parameter '" + symbol +
                        "' is unbound; pass --param " + symbol + "=VALUE");
  }
  return closed;
}

}  // namespace

ScalarFunction scenario_scalar(const FileScenario& s,
                               const std::map<std::string, double>& parameters) {
  if (!s.has_scalar()) throw ConfigError(s.name + ": no scalar function declared");
  return ScalarFunction{*s.domain, {"x"},
                        close_over(*s.scalar_body, parameters, "x", s.name)};
}

ParametricFunction scenario_parametric(const FileScenario& s,
                                       const std::map<std::string, double>& parameters) {
  if (s.has_parametric()) {
    return ParametricFunction{*s.domain,
                              {"p"},
                              {close_over(*s.parametric_first, parameters, "p", s.name)},
                              close_over(*s.parametric_second, parameters, "p", s.name)};
  }
  if (s.has_scalar()) return canonical_parametrize(scenario_scalar(s, parameters));
  throw ConfigError(s.name + ": no function declared");
}

GroupElement scenario_element(const FileScenario& s,
                              const std::map<std::string, double>& parameters) {
  if (!s.action) throw ConfigError(s.name + ": no [action] declared");
  const auto value = parameters.find(s.action->parameter);
  if (value == parameters.end())
    throw ConfigError(s.name + ": parameter '" + s.action->parameter +
                      "' is unbound; pass --param " + s.action->parameter + "=VALUE");
  return GroupElement{*s.action, value->second};
}

namespace {

// A check either inspects the declared parametric function directly or, for
// scalar scenarios with an action, the acted canonical parametrization.
InvertibilityReport check_report(const FileScenario& s, const ScenarioCheck& check,
                                 double parameter_value, const RunOptions& options,
                                 const std::string& where) {
  std::map<std::string, double> parameters;
  if (s.action) parameters[s.action->parameter] = parameter_value;

  if (check.kind == "not-graph") {
    ParametricFunction v = scenario_parametric(s, parameters);
    if (s.has_scalar()) {
      if (!s.action) throw ConfigError(where + ": requires an [action]");
      v = act(scenario_element(s, parameters), v);
    }
    return try_deparametrize(v, options.resolution).report;
  }

  if (s.has_scalar()) {
    if (!s.action) throw ConfigError(where + ": requires an [action]");
    return alpha_map(scenario_element(s, parameters), scenario_scalar(s, parameters),
                     options.resolution)
        .report;
  }
  return try_deparametrize(scenario_parametric(s, parameters), options.resolution).report;
}

void run_check(const FileScenario& s, const ScenarioCheck& check, std::size_t index,
               const RunOptions& options, Report& report) {
  const std::string where = s.name + ": check[" + std::to_string(index) + "]";
  std::vector<double> values = check.parameter_values;
  if (values.empty()) values.push_back(s.action ? s.action->identity_value : 0.0);

  for (double value : values) {
    const std::string tag = check.kind + (s.action ? " @ " + std::to_string(value) : "");
    if (check.kind == "acts-totally") {
      std::map<std::string, double> parameters;
      if (s.action) parameters[s.action->parameter] = value;
      if (!s.action) throw ConfigError(where + ": requires an [action]");
      const ParametricFunction acted =
          act(scenario_element(s, parameters), scenario_parametric(s, parameters));
      bool finite = true;
      try {
        validate(acted, 64);
      } catch (const Error&) {
        finite = false;
      }
      report.checks.push_back({tag, finite, finite ? 0.0 : 1.0, 0.0, ""});
      continue;
    }

    if (check.kind == "identity-at-zero") {
      if (!s.action || !s.has_scalar())
        throw ConfigError(where + ": requires an [action] and a scalar function");
      std::map<std::string, double> parameters{
          {s.action->parameter, s.action->identity_value}};
      const ScalarFunction u = scenario_scalar(s, parameters);
      const ClassicalActResult identity_case =
          classical_act(scenario_element(s, parameters), u, options.resolution);
      const double tolerance = check.tolerance.value_or(1e-12);
      if (!identity_case.ok()) {
        report.checks.push_back({tag, false, 1.0, tolerance, "identity not invertible"});
        continue;
      }
      double defect = 0.0;
      const Grid grid = sample(u.domain, 256);
      for (double x : grid.axis_points(0))
        defect = std::max(defect, std::abs((*identity_case.function)(x) - u(x)));
      report.checks.push_back({tag, defect <= tolerance, defect, tolerance, ""});
      continue;
    }

    const InvertibilityReport verdict_report =
        check_report(s, check, value, options, where);
    const Invertibility expected = check.kind == "invertible"
                                       ? Invertibility::Invertible
                                       : check.kind == "inconclusive"
                                             ? Invertibility::Inconclusive
                                             : Invertibility::NotInvertible;
    bool passed = verdict_report.verdict == expected;
    double defect = passed ? 0.0 : 1.0;
    double tolerance = 0.0;
    std::string note = std::string("verdict: ") + to_string(verdict_report.verdict);
    if (passed && check.witness.has_value()) {
      tolerance = check.tolerance.value_or(0.01);
      defect = std::abs(verdict_report.witness.value_or(1e9) - *check.witness);
      passed = defect <= tolerance;
    }
    report.checks.push_back({tag, passed, defect, tolerance, note});
  }
}

}  // namespace

Report run_scenario(const FileScenario& s, const RunOptions& options) {
  Report report;
  report.scenario = s.name;
  report.description = "scenario file";
  report.seed = options.seed;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < s.checks.size(); ++i)
    run_check(s, s.checks[i], i, options, report);
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace paract
