#include "l1quad/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace l1quad::harness {

Metrics metrics(const RunLog& log, const TimeWindow& window) {
  Metrics m;
  double sum_window = 0.0, sum_full = 0.0;
  std::size_t n_window = 0;
  for (const LogRow& r : log.rows) {
    const double e = r.position_error();
    sum_full += e * e;
    m.max_error = std::max(m.max_error, e);
    if (r.t >= window.begin && r.t <= window.end) {
      sum_window += e * e;
      ++n_window;
    }
  }
  m.crashed = log.crashed();
  if (m.crashed) {
    const double inf = std::numeric_limits<double>::infinity();
    m.rmse_window = m.rmse_full = m.max_error = inf;
    return m;
  }
  if (n_window == 0) {
    std::ostringstream os;
    os << "no samples in [" << window.begin << ", " << window.end << "]";
    throw Error(ErrorCode::EmptyWindow, os.str());
  }
  m.rmse_window = std::sqrt(sum_window / static_cast<double>(n_window));
  m.rmse_full = std::sqrt(sum_full / static_cast<double>(log.rows.size()));
  return m;
}

TimeWindow default_window(const ScenarioConfig& config) {
  if (config.metrics_window) return *config.metrics_window;
  const double end = config.duration;
  const auto& u = config.uncertainty;
  if (u.t_on > 0.0 || std::isfinite(u.t_off)) {
    return {u.t_on, std::min(u.t_off, end)};
  }
  return {0.0, end};
}

double rms_difference(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) {
    throw Error(ErrorCode::EmptyWindow, "no samples to compare");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum / static_cast<double>(n));
}

}  // namespace l1quad::harness
