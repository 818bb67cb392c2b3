#include "l1quad/harness/run_log.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace l1quad::harness {

std::string_view to_string(Termination status) {
  switch (status) {
    case Termination::Completed: return "completed";
    case Termination::Crashed: return "crashed";
    case Termination::ControllerError: return "controller_error";
  }
  return "unknown";
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "t",        "p_x",        "p_y",        "p_z",        "v_x",        "v_y",
      "v_z",      "yaw",        "pitch",      "roll",       "om_x",       "om_y",
      "om_z",     "pd_x",       "pd_y",       "pd_z",       "f",          "M_x",
      "M_y",      "M_z",        "uad_f",      "uad_Mx",     "uad_My",     "uad_Mz",
      "sighat_1", "sighat_2",   "sighat_3",   "sighat_4",   "sighat_5",   "sighat_6",
      "ztil_1",   "ztil_2",     "ztil_3",     "ztil_4",     "ztil_5",     "ztil_6",
      "sigtrue_m1", "sigtrue_m2", "sigtrue_m3", "sigtrue_m4", "sigtrue_um1", "sigtrue_um2"};
  return columns;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string to_csv(const RunLog& log) {
  std::ostringstream os;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const LogRow& r : log.rows) {
    std::vector<double> v;
    v.reserve(cols.size());
    v.push_back(r.t);
    for (int i = 0; i < 3; ++i) v.push_back(r.position(i));
    for (int i = 0; i < 3; ++i) v.push_back(r.velocity(i));
    v.insert(v.end(), {r.euler.yaw, r.euler.pitch, r.euler.roll});
    for (int i = 0; i < 3; ++i) v.push_back(r.body_rate(i));
    for (int i = 0; i < 3; ++i) v.push_back(r.desired_position(i));
    v.push_back(r.thrust);
    for (int i = 0; i < 3; ++i) v.push_back(r.moment(i));
    for (int i = 0; i < 4; ++i) v.push_back(r.u_ad(i));
    for (int i = 0; i < 6; ++i) v.push_back(r.sigma_hat(i));
    for (int i = 0; i < 6; ++i) v.push_back(r.z_tilde(i));
    for (int i = 0; i < 4; ++i) v.push_back(r.sigma_m_true(i));
    for (int i = 0; i < 2; ++i) v.push_back(r.sigma_um_true(i));
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_number(v[i]);
    os << '\n';
  }
  return os.str();
}

void write_csv(const RunLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << to_csv(log);
}

}  // namespace l1quad::harness
