#pragma once

#include "l1quad/harness/run_log.hpp"
#include "l1quad/harness/scenario.hpp"

namespace l1quad::harness {

/// Tracking deviation that ends a run as crashed [m].
constexpr double kCrashDeviation = 2.0;

/// Fixed-step closed loop: the controller (and L1 when enabled) runs at the
/// control rate, the plant is integrated at plant_dt with the input held.
/// Never throws for in-flight failures; they are recorded as the run's status.
RunLog run(const ScenarioConfig& config);

}  // namespace l1quad::harness
