#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "l1quad/plant.hpp"

namespace l1quad::harness {

enum class Termination { Completed, Crashed, ControllerError };

std::string_view to_string(Termination status);

/// One control tick.
struct LogRow {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  EulerZYX euler;
  Vec3 body_rate = Vec3::Zero();
  Vec3 desired_position = Vec3::Zero();
  double thrust = 0.0;
  Vec3 moment = Vec3::Zero();
  Vec4 u_ad = Vec4::Zero();
  Vec6 sigma_hat = Vec6::Zero();
  Vec6 z_tilde = Vec6::Zero();
  Vec4 sigma_m_true = Vec4::Zero();
  Vec2 sigma_um_true = Vec2::Zero();

  double position_error() const { return (position - desired_position).norm(); }
};

struct RunLog {
  std::string scenario;
  bool l1_enabled = false;
  std::vector<LogRow> rows;
  Termination status = Termination::Completed;
  std::string message;

  bool crashed() const { return status != Termination::Completed; }
};

/// Column names in file order.
const std::vector<std::string>& csv_columns();

/// Writes the log as CSV with a header row; numbers use 9 significant digits.
void write_csv(const RunLog& log, const std::string& path);
std::string to_csv(const RunLog& log);

/// Formats a double with 9 significant digits ("inf", "-inf", "nan" otherwise).
std::string format_number(double value);

}  // namespace l1quad::harness
