#pragma once

#include "l1quad/harness/run_log.hpp"
#include "l1quad/harness/scenario.hpp"

namespace l1quad::harness {

struct Metrics {
  double rmse_window = 0.0;  // over the requested window [m]
  double rmse_full = 0.0;    // over the whole run [m]
  double max_error = 0.0;    // max ||p - p_d|| over the run [m]
  bool crashed = false;
};

/// Position RMSE, sqrt(mean ||p - p_d||^2), over samples with t in the window.
/// A crashed run reports infinite RMSE and max error. Throws EmptyWindow when
/// no sample falls inside the window.
Metrics metrics(const RunLog& log, const TimeWindow& window);

/// The window used for comparisons: the configured metrics window, else the
/// uncertainty activation window clipped to the run, else the whole run.
TimeWindow default_window(const ScenarioConfig& config);

/// Root-mean-square of the elementwise difference a - b.
double rms_difference(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace l1quad::harness
