#pragma once

// Flat-output references: hover, figure-8 and tilted figure-8.
//
// The periodic patterns are Lissajous curves around a center p0:
//   p_d(t) = p0 + [Ax sin(w t), Ay sin(2 w t), Az sin(2 w t)],  w = 2 pi / T
// with Az = 0 for the planar figure-8. Yaw is held at a constant value.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "l1quad/error.hpp"
#include "l1quad/geometry.hpp"

namespace l1quad {

struct FlatOutput {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  Vec3 jerk = Vec3::Zero();
  Vec3 snap = Vec3::Zero();
  double yaw = 0.0;
  double yaw_rate = 0.0;
  double yaw_accel = 0.0;
};

enum class TrajectoryKind { Hover, Figure8, TiltedFigure8 };

inline std::string_view to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::Hover: return "hover";
    case TrajectoryKind::Figure8: return "figure8";
    case TrajectoryKind::TiltedFigure8: return "tilted_figure8";
  }
  return "unknown";
}

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Hover;
  Vec3 center = Vec3(0.0, 0.0, -1.0);
  double amplitude_x = 0.75;
  double amplitude_y = 0.5;
  double amplitude_z = 0.3;
  double period = 17.0;
  double yaw = 0.0;

  static TrajectorySpec hover(const Vec3& point) {
    TrajectorySpec s;
    s.kind = TrajectoryKind::Hover;
    s.center = point;
    return s;
  }

  static TrajectorySpec figure8() {
    TrajectorySpec s;
    s.kind = TrajectoryKind::Figure8;
    return s;
  }

  static TrajectorySpec tilted_figure8() {
    TrajectorySpec s;
    s.kind = TrajectoryKind::TiltedFigure8;
    return s;
  }
};

namespace trajectory {

namespace detail {

// Value and first four derivatives of a * sin(k t).
struct SineDerivatives {
  double d[5];
};

inline SineDerivatives sine_chain(double a, double k, double t) {
  const double s = std::sin(k * t);
  const double c = std::cos(k * t);
  const double k2 = k * k;
  return {{a * s, a * k * c, -a * k2 * s, -a * k2 * k * c, a * k2 * k2 * s}};
}

}  // namespace detail

inline FlatOutput sample(const TrajectorySpec& spec, double t) {
  FlatOutput out;
  out.position = spec.center;
  out.yaw = spec.yaw;
  if (spec.kind == TrajectoryKind::Hover) {
    return out;
  }

  const double w = 2.0 * std::numbers::pi / spec.period;
  const auto x = detail::sine_chain(spec.amplitude_x, w, t);
  const auto y = detail::sine_chain(spec.amplitude_y, 2.0 * w, t);
  detail::SineDerivatives z{{0.0, 0.0, 0.0, 0.0, 0.0}};
  if (spec.kind == TrajectoryKind::TiltedFigure8) {
    z = detail::sine_chain(spec.amplitude_z, 2.0 * w, t);
  }

  Vec3* slots[5] = {&out.position, &out.velocity, &out.acceleration, &out.jerk, &out.snap};
  for (int i = 0; i < 5; ++i) {
    *slots[i] += Vec3(x.d[i], y.d[i], z.d[i]);
  }
  return out;
}

/// Minimum of ||g e3 - a_d(t)|| over one period (or the constant value for
/// hover), evaluated on a uniform grid that includes the peaks of sin(2 w t).
inline double min_thrust_accel(const TrajectorySpec& spec, double g, int samples = 4000) {
  if (spec.kind == TrajectoryKind::Hover) {
    return g;
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = spec.period * static_cast<double>(i) / samples;
    const FlatOutput f = sample(spec, t);
    lowest = std::min(lowest, (g * kE3 - f.acceleration).norm());
  }
  return lowest;
}

/// Throws InvalidSpec for a malformed spec or one whose acceleration brings
/// the required specific thrust below 0.1 g.
inline void validate(const TrajectorySpec& spec, double g = 9.81) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidSpec, why); };
  if (!spec.center.allFinite() || !std::isfinite(spec.yaw)) {
    fail("center and yaw must be finite");
  }
  if (!(spec.period > 0.0) || !std::isfinite(spec.period)) {
    fail("period must be positive");
  }
  if (spec.kind == TrajectoryKind::Hover) {
    return;
  }
  if (!(spec.amplitude_x >= 0.0) || !(spec.amplitude_y >= 0.0) || !(spec.amplitude_z >= 0.0)) {
    fail("amplitudes must be non-negative");
  }
  if (spec.kind == TrajectoryKind::TiltedFigure8 && !(spec.amplitude_z > 0.0)) {
    fail("tilted figure-8 needs a positive z amplitude");
  }
  const double margin = min_thrust_accel(spec, g);
  if (margin < 0.1 * g) {
    std::ostringstream os;
    os << "min ||g e3 - a_d|| = " << margin << " m/s^2 is below 0.1 g";
    fail(os.str());
  }
}

}  // namespace trajectory
}  // namespace l1quad
