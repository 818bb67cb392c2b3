#pragma once

#include <string>
#include <vector>

#include "l1quad/harness/metrics.hpp"
#include "l1quad/harness/scenario.hpp"

namespace l1quad::harness {

struct ComparisonRow {
  std::string scenario;
  Metrics off;
  Metrics on;

  /// rmse_off / rmse_on; infinite when only the baseline crashed.
  double ratio() const;
};

/// Resolves a suite id, a suite file (YAML with a `scenarios` list) or a
/// single scenario path/id into scenario references.
std::vector<std::string> resolve_suite(const std::string& id_or_path);

/// Runs every scenario with L1 off and on. When `out_dir` is non-empty, writes
/// `<name>_l1off.csv`, `<name>_l1on.csv` and `summary.csv` into it.
std::vector<ComparisonRow> compare(const std::vector<std::string>& scenarios,
                                   const std::string& out_dir);

std::string summary_csv(const std::vector<ComparisonRow>& rows);

}  // namespace l1quad::harness
