// Command-line front end: one-off actions on scenario files, graph
// recovery, CSV export for plotting, and the verification suites.
//
// Exit codes are stable API:
//   0 ok, 1 check failure, 2 configuration error, 3 numeric fault,
//   4 not a graph / not invertible, 5 inconclusive.

#include <CLI11.hpp>

#include <paract/analysis.hpp>
#include <paract/harness.hpp>
#include <paract/scenario.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumericFault = 3;
constexpr int kExitNotGraph = 4;
constexpr int kExitInconclusive = 5;

std::map<std::string, double> parse_param_flags(const std::vector<std::string>& raw) {
  std::map<std::string, double> parameters;
  for (const std::string& entry : raw) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0)
      throw paract::ConfigError("--param expects NAME=REAL, got '" + entry + "'");
    const std::string name = entry.substr(0, eq);
    const std::string value_text = entry.substr(eq + 1);
    double value = 0.0;
    const char* first = value_text.data();
    const char* last = value_text.data() + value_text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
      throw paract::ConfigError("--param " + name + ": expected a real number, got '" +
                                value_text + "'");
    parameters[name] = value;
  }
  return parameters;
}

std::string format_number(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, end);
}

// Writes to the path, or to stdout when no path was given.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw paract::ConfigError("cannot open output file '" + path + "'");
    }
  }

  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
};

int cmd_act(const std::string& scenario_path, const std::vector<std::string>& raw_params,
            int resolution, const std::string& out_path, bool header) {
  const paract::FileScenario scenario = paract::load_scenario(scenario_path);
  const auto parameters = parse_param_flags(raw_params);
  const paract::GroupElement g = paract::scenario_element(scenario, parameters);
  const paract::ParametricFunction v = paract::scenario_parametric(scenario, parameters);
  const paract::ParametricFunction acted = paract::act(g, v);

  const paract::Grid grid = paract::sample(acted.domain, resolution);
  paract::PointCloud rows(3);
  for (double p : grid.axis_points(0)) {
    const std::vector<double> image = acted.value(p);
    const double row[3] = {p, image[0], image[1]};
    rows.push(row);
  }

  OutputTarget out(out_path);
  if (header) {
    const std::vector<std::string> names = {"p", "x", "u"};
    rows.write_csv(out.stream(), &names);
  } else {
    rows.write_csv(out.stream());
  }
  return kExitOk;
}

int cmd_deparametrize(const std::string& scenario_path,
                      const std::vector<std::string>& raw_params, int resolution,
                      const std::string& out_path, bool header) {
  const paract::FileScenario scenario = paract::load_scenario(scenario_path);
  if (!scenario.has_parametric())
    throw paract::ConfigError(scenario_path + ": deparametrize requires v1/v2");
  const auto parameters = parse_param_flags(raw_params);
  const paract::ParametricFunction v = paract::scenario_parametric(scenario, parameters);

  const paract::DeparametrizeResult result = paract::try_deparametrize(v, resolution);
  OutputTarget out(out_path);
  std::ostream& message = out.to_stdout() ? std::cerr : std::cout;
  message << "verdict: " << paract::to_string(result.report.verdict);
  if (result.report.witness)
    message << " witness=" << format_number(*result.report.witness);
  message << " min|V1'|=" << format_number(result.report.min_abs_derivative) << "\n";

  switch (result.report.verdict) {
    case paract::Invertibility::NotInvertible:
      return kExitNotGraph;
    case paract::Invertibility::Inconclusive:
      return kExitInconclusive;
    case paract::Invertibility::Invertible:
      break;
  }

  paract::PointCloud table(2);
  const paract::Grid table_grid = paract::sample(result.function->domain, resolution);
  for (double x : table_grid.axis_points(0))
    table.push(x, (*result.function)(x));
  if (header) {
    const std::vector<std::string> names = {"x", "u"};
    table.write_csv(out.stream(), &names);
  } else {
    table.write_csv(out.stream());
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_path) {
  std::vector<paract::Report> reports;
  std::string json;
  if (suite == "all") {
    reports = paract::run_all(seed);
    json = paract::to_json(reports, seed);
  } else if (paract::is_builtin_scenario(suite)) {
    reports.push_back(paract::run_builtin(suite, seed));
    json = paract::to_json(reports.front());
  } else if (std::filesystem::exists(suite)) {
    paract::RunOptions options;
    options.seed = seed;
    reports.push_back(paract::run_scenario(paract::load_scenario(suite), options));
    json = paract::to_json(reports.front());
  } else {
    throw paract::ConfigError("unknown suite '" + suite +
                              "' (builtin scenario names: use `paract list`)");
  }

  std::cout << paract::summary_table(reports);
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw paract::ConfigError("cannot open report file '" + out_path + "'");
    out << json;
  }
  std::cout << "report: " << out_path << "\n";
  for (const paract::Report& report : reports) {
    if (!report.passed()) return kExitCheckFailure;
  }
  return kExitOk;
}

int cmd_list() {
  for (const paract::ScenarioInfo& info : paract::builtin_scenarios())
    std::cout << info.name << "\n    " << info.description << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global group and semigroup actions on functions in parametric form"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::vector<std::string> raw_params;
  int resolution = 1024;
  std::string out_path;
  bool header = false;
  std::string suite = "all";
  std::uint64_t seed = 0;
  std::string report_path = "paract-report.json";

  CLI::App* act = app.add_subcommand(
      "act", "Act on the scenario's function and write the image as CSV (p, x, u)");
  act->add_option("scenario", scenario_path, "scenario file")->required();
  act->add_option("--param", raw_params, "parameter assignment NAME=REAL (repeatable)");
  act->add_option("--grid", resolution, "grid resolution");
  act->add_option("--out", out_path, "output CSV path (default: stdout)");
  act->add_flag("--header", header, "emit a CSV header row");

  CLI::App* deparametrize = app.add_subcommand(
      "deparametrize", "Recover U = V2 ∘ V1⁻¹ when the image is a graph");
  deparametrize->add_option("scenario", scenario_path, "scenario file")->required();
  deparametrize->add_option("--param", raw_params,
                            "parameter assignment NAME=REAL (repeatable)");
  deparametrize->add_option("--grid", resolution,
                            "scan and tabulation resolution");
  deparametrize->add_option("--out", out_path, "output CSV path (default: stdout)");
  deparametrize->add_flag("--header", header, "emit a CSV header row");

  CLI::App* verify = app.add_subcommand(
      "verify", "Run a builtin verification scenario, a scenario file, or 'all'");
  verify->add_option("suite", suite, "'all', a builtin scenario name, or a file");
  verify->add_option("--seed", seed, "seed for randomized checks");
  verify->add_option("--out", report_path, "JSON report path");

  CLI::App* list = app.add_subcommand("list", "List builtin verification scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    if (error.get_exit_code() == 0) return app.exit(error);  // --help
    app.exit(error);
    return kExitConfig;
  }

  try {
    if (act->parsed()) return cmd_act(scenario_path, raw_params, resolution, out_path, header);
    if (deparametrize->parsed())
      return cmd_deparametrize(scenario_path, raw_params, resolution, out_path, header);
    if (verify->parsed()) return cmd_verify(suite, seed, report_path);
    if (list->parsed()) return cmd_list();
  } catch (const paract::DomainFaultError& error) {
    std::cerr << "numeric fault: " << error.what() << "\n";
    return kExitNumericFault;
  } catch (const paract::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
