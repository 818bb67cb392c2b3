#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "l1quad/geometric_controller.hpp"
#include "l1quad/l1_controller.hpp"
#include "l1quad/plant.hpp"
#include "l1quad/trajectory.hpp"

namespace l1quad::harness {

struct SaturationLimits {
  double thrust_min = 0.0;
  double thrust_max = 2.0 * 0.075 * 9.81;
  double moment_max = 0.01;

  Vec4 apply(const Vec4& u) const {
    Vec4 out;
    out(0) = std::clamp(u(0), thrust_min, thrust_max);
    for (int i = 1; i < 4; ++i) out(i) = std::clamp(u(i), -moment_max, moment_max);
    return out;
  }
};

struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;
};

/// A complete, reproducible experiment.
struct ScenarioConfig {
  std::string name = "scenario";
  TrajectorySpec trajectory;
  GeometricGains gains;
  PhysicalParams phys;
  MixerParams mixer;
  L1Params l1;
  bool l1_enabled = true;
  UncertaintySpec uncertainty;
  double duration = 30.0;
  double control_rate = 200.0;
  double plant_dt = 0.001;
  SaturationLimits saturation;
  std::optional<TimeWindow> metrics_window;
  unsigned seed = 0;  // reserved; every run is deterministic

  double control_period() const { return 1.0 / control_rate; }
  int substeps() const;
  int control_ticks() const;
};

/// Throws ValidationError listing every violated invariant.
void validate(const ScenarioConfig& config);

/// Parses YAML scenario text. `source` names the origin in error messages.
/// Omitted fields keep their defaults; unknown keys are ParseErrors.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<string>");

/// Loads a scenario from a file path, or from the built-in catalog when
/// `path_or_id` names a built-in scenario and no such file exists.
ScenarioConfig load_scenario(const std::string& path_or_id);

/// Built-in catalog.
std::vector<std::string> builtin_ids();
bool is_builtin(const std::string& id);
ScenarioConfig builtin_scenario(const std::string& id);
const std::string& builtin_source(const std::string& id);

/// Built-in suites of scenario ids.
std::vector<std::string> builtin_suite_ids();
std::optional<std::vector<std::string>> builtin_suite(const std::string& id);

/// Amplitude multiplier applied to the state-dependent pitch moment of
/// exp2-case2 so that the baseline controller leaves the 2 m crash envelope.
double exp2_state_dependent_scale();

}  // namespace l1quad::harness
