#include "l1quad/harness/compare.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "l1quad/harness/run_log.hpp"
#include "l1quad/harness/simulation.hpp"

namespace l1quad::harness {

double ComparisonRow::ratio() const {
  const double inf = std::numeric_limits<double>::infinity();
  if (off.crashed && on.crashed) return std::numeric_limits<double>::quiet_NaN();
  if (off.crashed) return inf;
  if (on.crashed) return 0.0;
  if (on.rmse_window == 0.0) return off.rmse_window == 0.0 ? 1.0 : inf;
  return off.rmse_window / on.rmse_window;
}

std::vector<std::string> resolve_suite(const std::string& id_or_path) {
  if (auto suite = builtin_suite(id_or_path)) return *suite;
  if (is_builtin(id_or_path)) return {id_or_path};
  if (!std::filesystem::exists(id_or_path)) {
    throw Error(ErrorCode::UnknownScenario,
                "'" + id_or_path + "' is neither a suite id, a scenario id nor a file");
  }
  YAML::Node root;
  try {
    root = YAML::LoadFile(id_or_path);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ParseError, id_or_path + ": " + e.what());
  }
  if (!root.IsMap() || !root["scenarios"]) {
    // Not a suite file; treat it as a single scenario file.
    return {id_or_path};
  }
  const auto list = root["scenarios"];
  if (!list.IsSequence()) {
    throw Error(ErrorCode::ParseError, id_or_path + ": 'scenarios' must be a list");
  }
  const auto base = std::filesystem::path(id_or_path).parent_path();
  std::vector<std::string> out;
  for (const auto& item : list) {
    const std::string ref = item.as<std::string>();
    if (is_builtin(ref) || std::filesystem::path(ref).is_absolute()) {
      out.push_back(ref);
    } else {
      out.push_back((base / ref).string());
    }
  }
  return out;
}

std::string summary_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "scenario,rmse_off,rmse_on,ratio\n";
  for (const auto& r : rows) {
    os << r.scenario << ',' << format_number(r.off.rmse_window) << ','
       << format_number(r.on.rmse_window) << ',' << format_number(r.ratio()) << '\n';
  }
  return os.str();
}

std::vector<ComparisonRow> compare(const std::vector<std::string>& scenarios,
                                   const std::string& out_dir) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  std::vector<ComparisonRow> rows;
  for (const auto& ref : scenarios) {
    ScenarioConfig config = load_scenario(ref);
    const TimeWindow window = default_window(config);
    ComparisonRow row;
    row.scenario = config.name;
    for (const bool enabled : {false, true}) {
      config.l1_enabled = enabled;
      const RunLog log = run(config);
      (enabled ? row.on : row.off) = metrics(log, window);
      if (!out_dir.empty()) {
        const auto file = std::filesystem::path(out_dir) /
                          (config.name + (enabled ? "_l1on.csv" : "_l1off.csv"));
        write_csv(log, file.string());
      }
    }
    rows.push_back(row);
  }
  if (!out_dir.empty()) {
    std::ofstream out(std::filesystem::path(out_dir) / "summary.csv", std::ios::binary);
    out << summary_csv(rows);
  }
  return rows;
}

}  // namespace l1quad::harness
