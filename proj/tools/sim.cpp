// Command-line front end for the scenario harness.
//
//   sim run --scenario <path|builtin-id> [--l1 on|off] [--out <dir>]
//   sim compare --suite <id|path> [--out <dir>]
//   sim list
//
// Exit codes: 0 completed, 1 crash detected, 2 configuration error.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "l1quad/harness/compare.hpp"
#include "l1quad/harness/metrics.hpp"
#include "l1quad/harness/simulation.hpp"

namespace {

constexpr int kExitCompleted = 0;
constexpr int kExitCrash = 1;
constexpr int kExitConfig = 2;

using namespace l1quad;
using namespace l1quad::harness;

int run_command(const std::string& scenario, const std::string& l1_flag,
                const std::string& out_dir) {
  ScenarioConfig config = load_scenario(scenario);
  if (l1_flag == "on") config.l1_enabled = true;
  if (l1_flag == "off") config.l1_enabled = false;

  const RunLog log = run(config);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) /
                      (config.name + (config.l1_enabled ? "_l1on.csv" : "_l1off.csv"));
    write_csv(log, path.string());
    std::cout << "log: " << path.string() << "\n";
  }

  const Metrics m = metrics(log, default_window(config));
  const TimeWindow w = default_window(config);
  std::cout << "scenario: " << config.name << "\n"
            << "l1: " << (config.l1_enabled ? "on" : "off") << "\n"
            << "status: " << to_string(log.status) << "\n";
  if (!log.message.empty()) std::cout << "message: " << log.message << "\n";
  std::cout << "rmse[" << w.begin << ", " << w.end << "]: " << format_number(m.rmse_window) << "\n"
            << "rmse_full: " << format_number(m.rmse_full) << "\n"
            << "max_error: " << format_number(m.max_error) << "\n";
  return log.crashed() ? kExitCrash : kExitCompleted;
}

int compare_command(const std::string& suite, const std::string& out_dir) {
  const auto rows = compare(resolve_suite(suite), out_dir);
  std::cout << summary_csv(rows);
  bool any_crash = false;
  for (const auto& r : rows) any_crash = any_crash || r.off.crashed || r.on.crashed;
  return any_crash ? kExitCrash : kExitCompleted;
}

int list_command() {
  std::cout << "scenarios:\n";
  for (const auto& id : builtin_ids()) std::cout << "  " << id << "\n";
  std::cout << "suites:\n";
  for (const auto& id : builtin_suite_ids()) {
    std::cout << "  " << id << ":";
    const auto members = builtin_suite(id).value();
    for (const auto& s : members) std::cout << " " << s;
    std::cout << "\n";
  }
  return kExitCompleted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrotor geometric control with L1 augmentation: scenario simulator"};
  app.require_subcommand(1);

  std::string scenario, l1_flag, out_dir, suite;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--scenario", scenario, "Scenario file or built-in id")->required();
  run_cmd->add_option("--l1", l1_flag, "Override the L1 toggle")
      ->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_option("--out", out_dir, "Directory for the run log CSV");

  auto* compare_cmd = app.add_subcommand("compare", "Run a suite with L1 off and on");
  compare_cmd->add_option("--suite", suite, "Suite id, suite file or scenario")->required();
  compare_cmd->add_option("--out", out_dir, "Directory for logs and summary.csv");

  auto* list_cmd = app.add_subcommand("list", "Print built-in scenario and suite ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitCompleted : kExitConfig;
  }

  try {
    if (*run_cmd) return run_command(scenario, l1_flag, out_dir);
    if (*compare_cmd) return compare_command(suite, out_dir);
    if (*list_cmd) return list_command();
  } catch (const l1quad::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
