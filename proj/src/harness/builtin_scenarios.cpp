#include <algorithm>
#include <map>

#include "l1quad/harness/scenario.hpp"

namespace l1quad::harness {

namespace {

// Trajectory runs: 27 s with uncertainties active on [5, 22] and RMSE taken
// over the same window. Hover injections: 60 s with signals on [20, 50].
// Slung weights: a constant downward force m_w g from t = 2 s.

constexpr const char* kExp1Base = R"(
duration: 27
trajectory: {kind: figure8}
metrics: {window: [5, 22]}
)";

constexpr const char* kExp2Base = R"(
duration: 27
trajectory: {kind: tilted_figure8}
metrics: {window: [5, 22]}
)";

constexpr const char* kDetunedGains = R"(
gains:
  kp: [0.31, 0.225, 0.345]
  kr: [0.0075, 0.0075, 0.001]
)";

constexpr const char* kChippedPropeller = R"(
uncertainty:
  window: [0, .inf]
  effectiveness: [0.8, 1, 1, 1]
)";

// The exp2-case2 pitch amplitude is 0.01 times this factor; see
// exp2_state_dependent_scale().
constexpr double kExp2StateScale = 0.5;

std::string exp2_state_dependent() {
  return R"(
uncertainty:
  window: [5, 22]
  matched:
    roll:
      - {type: sin, amp: 0.001, omega: 0.75, t0: 5}
    pitch:
      - {type: sin, amp: )" + std::to_string(0.01 * kExp2StateScale) +
         R"(, omega: 1, t0: 5, factor: p1_squared}
)";
}

std::string slung(const char* name, double grams) {
  return std::string("name: ") + name + R"(
duration: 20
trajectory: {kind: hover, center: [0, 0, -1]}
metrics: {window: [7, 20]}
uncertainty:
  window: [2, .inf]
  force:
    z:
      - {type: const, amp: )" +
         std::to_string(grams * 1e-3 * 9.81) + "}\n";
}

const std::map<std::string, std::string>& catalog() {
  static const std::map<std::string, std::string> entries = [] {
    std::map<std::string, std::string> m;
    m["hover"] = R"(
name: hover
duration: 30
trajectory: {kind: hover, center: [0, 0, -1]}
)";
    m["hover-thrust"] = R"(
name: hover-thrust
duration: 60
trajectory: {kind: hover, center: [0, 0, -1]}
metrics: {window: [20, 50]}
uncertainty:
  window: [20, 50]
  matched:
    thrust:
      - {type: sin, amp: 0.2, omega: 1, t0: 20}
      - {type: ramp, amp: 0.01, t0: 20}
      - {type: sin, amp: 0.15, omega: 1.5, t0: 20}
)";
    m["hover-pitch"] = R"(
name: hover-pitch
duration: 60
trajectory: {kind: hover, center: [0, 0, -1]}
metrics: {window: [20, 50]}
uncertainty:
  window: [20, 50]
  matched:
    pitch:
      - {type: sin, amp: 0.002, omega: 1, t0: 20}
      - {type: ramp, amp: 0.0002, t0: 20}
      - {type: sin, amp: 0.001, omega: 0.75, t0: 20}
)";
    m["slung-4g"] = slung("slung-4g", 4.0);
    m["slung-8g"] = slung("slung-8g", 8.0);
    m["slung-16g"] = slung("slung-16g", 16.0);

    // Experiment 1: planar figure-8.
    m["exp1-case1"] = std::string("name: exp1-case1") + kExp1Base;
    m["exp1-case2"] = std::string("name: exp1-case2") + kExp1Base + R"(
uncertainty:
  window: [5, 22]
  matched:
    roll:
      - {type: sin, amp: 0.001, omega: 0.75, t0: 5}
    pitch:
      - {type: sin, amp: 0.0008, omega: 1, t0: 5}
      - {type: sin, amp: 0.0008, omega: 0.5, t0: 5}
)";
    m["exp1-case3"] = std::string("name: exp1-case3") + kExp1Base + R"(
uncertainty:
  window: [5, 22]
  matched:
    roll:
      - {type: sin, amp: 0.001, omega: 0.75, t0: 5}
    pitch:
      - {type: sin, amp: 0.0005, omega: 1, t0: 5, factor: p1_squared}
)";
    m["exp1-case4"] = std::string("name: exp1-case4") + kExp1Base + R"(
uncertainty:
  window: [5, 22]
  input_gain:
    pitch:
      - {type: sin, amp: 0.4, omega: 1, t0: 5}
)";
    m["exp1-case5"] = std::string("name: exp1-case5") + kExp1Base + kChippedPropeller;
    m["exp1-case6"] = std::string("name: exp1-case6") + kExp1Base + kDetunedGains;

    // Experiment 2: tilted figure-8.
    m["exp2-case1"] = std::string("name: exp2-case1") + kExp2Base;
    m["exp2-case2"] = std::string("name: exp2-case2") + kExp2Base + exp2_state_dependent();
    m["exp2-case3"] = std::string("name: exp2-case3") + kExp2Base + R"(
uncertainty:
  window: [5, 22]
  matched:
    thrust:
      - {type: sin, amp: 0.2, omega: 0.5, t0: 5}
      - {type: sin, amp: 0.15, omega: 0.75, t0: 5}
    roll:
      - {type: sin, amp: 0.001, omega: 0.75, t0: 5}
    pitch:
      - {type: sin, amp: 0.0008, omega: 1, t0: 5}
      - {type: sin, amp: 0.0008, omega: 0.5, t0: 5}
  input_gain:
    thrust:
      - {type: sin, amp: 0.2, omega: 1, t0: 5}
)";
    m["exp2-case4"] = std::string("name: exp2-case4") + kExp2Base + R"(
uncertainty:
  window: [5, 22]
  input_gain:
    thrust:
      - {type: sin, amp: 0.2, omega: 1, t0: 5}
)";
    m["exp2-case5"] = std::string("name: exp2-case5") + kExp2Base + kChippedPropeller;
    m["exp2-case6"] = std::string("name: exp2-case6") + kExp2Base + kDetunedGains;
    return m;
  }();
  return entries;
}

std::vector<std::string> range(const char* prefix, int first, int last) {
  std::vector<std::string> out;
  for (int i = first; i <= last; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

const std::map<std::string, std::vector<std::string>>& suites() {
  static const std::map<std::string, std::vector<std::string>> entries = [] {
    std::map<std::string, std::vector<std::string>> m;
    m["exp1"] = range("exp1-case", 1, 6);
    m["exp2"] = range("exp2-case", 1, 6);
    m["hover"] = {"hover-thrust", "hover-pitch"};
    m["slung"] = {"slung-4g", "slung-8g", "slung-16g"};
    m["improvement"] = {"exp1-case2", "exp1-case3", "exp1-case4"};
    std::vector<std::string> full = m["exp1"];
    for (const char* s : {"exp2", "hover", "slung"}) {
      full.insert(full.end(), m[s].begin(), m[s].end());
    }
    m["full"] = full;
    return m;
  }();
  return entries;
}

}  // namespace

double exp2_state_dependent_scale() { return kExp2StateScale; }

std::vector<std::string> builtin_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, text] : catalog()) ids.push_back(id);
  return ids;
}

bool is_builtin(const std::string& id) { return catalog().count(id) > 0; }

const std::string& builtin_source(const std::string& id) {
  const auto it = catalog().find(id);
  if (it == catalog().end()) {
    throw Error(ErrorCode::UnknownScenario, "no built-in scenario '" + id + "'");
  }
  return it->second;
}

ScenarioConfig builtin_scenario(const std::string& id) {
  return parse_scenario(builtin_source(id), id);
}

std::vector<std::string> builtin_suite_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, list] : suites()) ids.push_back(id);
  return ids;
}

std::optional<std::vector<std::string>> builtin_suite(const std::string& id) {
  const auto it = suites().find(id);
  if (it == suites().end()) return std::nullopt;
  return it->second;
}

}  // namespace l1quad::harness
