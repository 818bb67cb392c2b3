#pragma once

// Geometric tracking controller on SE(3) with differential-flatness feedforward.
//
// Sign convention (NED, thrust acting along -b3):
//   F_d  = -Kp e_p - Kv e_v - m g e3 + m a_d
//   f    = -F_d . (R e3)
//   b3d  = -F_d / ||F_d||
// so that hover yields f = m g and R_d = I.

#include <cmath>
#include <sstream>

#include "l1quad/error.hpp"
#include "l1quad/geometry.hpp"
#include "l1quad/plant.hpp"
#include "l1quad/trajectory.hpp"

namespace l1quad {

struct GeometricGains {
  Mat3 kp = Vec3(0.62, 0.45, 0.69).asDiagonal().toDenseMatrix();
  Mat3 kv = Vec3(0.1, 0.1, 0.15).asDiagonal().toDenseMatrix();
  Mat3 kr = Vec3(0.015, 0.015, 0.002).asDiagonal().toDenseMatrix();
  Mat3 kw = Vec3(0.0022, 0.0022, 0.0007).asDiagonal().toDenseMatrix();

  /// Baseline with Kp and Kr halved.
  GeometricGains detuned(double factor = 0.5) const {
    GeometricGains g = *this;
    g.kp *= factor;
    g.kr *= factor;
    return g;
  }

  void validate() const {
    auto spd = [](const Mat3& k) {
      return (k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-15 && k.llt().info() == Eigen::Success;
    };
    if (!spd(kp) || !spd(kv) || !spd(kr) || !spd(kw)) {
      throw Error(ErrorCode::InvalidParams, "controller gains must be symmetric positive definite");
    }
  }
};

struct DesiredAttitude {
  Rotation attitude;
  Vec3 rate = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
};

struct AttitudeErrors {
  Vec3 rotation = Vec3::Zero();
  Vec3 rate = Vec3::Zero();
};

/// Everything the controller computed on one call, for logging and tests.
struct ControlOutput {
  ControlInput input;
  Vec3 desired_force = Vec3::Zero();
  DesiredAttitude desired;
  AttitudeErrors errors;
};

namespace geometric {

constexpr double kMinForce = 1e-6;       // [N]
constexpr double kMinYawCross = 1e-6;
constexpr double kMinThrustAccelFraction = 0.1;

inline Vec3 desired_force(const FlatOutput& flat, const QuadState& x, const GeometricGains& gains,
                          const PhysicalParams& phys) {
  const Vec3 ep = x.position - flat.position;
  const Vec3 ev = x.velocity - flat.velocity;
  return -gains.kp * ep - gains.kv * ev - phys.mass * phys.gravity * kE3 +
         phys.mass * flat.acceleration;
}

inline double thrust_command(const Vec3& force, const Rotation& r) {
  return -force.dot(r.col(2));
}

inline Rotation desired_attitude(const Vec3& force, double yaw) {
  const double norm = force.norm();
  if (!(norm >= kMinForce)) {
    throw Error(ErrorCode::DegenerateForce, "||F_d|| below 1e-6 N");
  }
  const Vec3 b3 = -force / norm;
  const Vec3 heading(std::cos(yaw), std::sin(yaw), 0.0);
  const Vec3 cross = b3.cross(heading);
  const double cross_norm = cross.norm();
  if (!(cross_norm >= kMinYawCross)) {
    throw Error(ErrorCode::SingularYawAxis, "desired thrust axis is parallel to the heading");
  }
  const Vec3 b2 = cross / cross_norm;
  const Vec3 b1 = b2.cross(b3);
  Mat3 m;
  m << b1, b2, b3;
  return orthonormalize(m);
}

/// Desired body rate and body angular acceleration of R_d along the flat
/// trajectory.
///
/// With w = g e3 - a_d (the specific thrust the reference demands) and the
/// columns b1, b2, b3 of R_d:
///   h_rate  = b3' = -(j_d - (b3 . j_d) b3) / ||w||
///   h_accel = b3'' - wd x (wd x b3),  wd = R_d Omega_d
///   Omega_d  = [-h_rate . b2,  h_rate . b1,  Omega_3]
///   Omega_d' = [-h_accel . b2, h_accel . b1, Omega_3']
/// where b3'' follows from differentiating b3 = w/||w|| twice and Omega_3 is
/// the exact yaw rate of the frame built from the heading (cos psi, sin psi, 0).
inline DesiredAttitude desired_angular_rates(const FlatOutput& flat, const Rotation& rd,
                                             double gravity) {
  const Vec3 w = gravity * kE3 - flat.acceleration;
  const double n = w.norm();
  if (!(n >= kMinThrustAccelFraction * gravity)) {
    std::ostringstream os;
    os << "||g e3 - a_d|| = " << n << " below 0.1 g";
    throw Error(ErrorCode::SmallFeedforwardDenominator, os.str());
  }
  const Vec3 b1 = rd.col(0);
  const Vec3 b2 = rd.col(1);
  const Vec3 b3 = rd.col(2);
  const Vec3 w_dot = -flat.jerk;
  const Vec3 w_ddot = -flat.snap;

  const Vec3 h_rate = (w_dot - b3.dot(w_dot) * b3) / n;
  const Vec3 b3_ddot =
      (w_ddot - (h_rate.dot(w_dot) + b3.dot(w_ddot)) * b3 - 2.0 * b3.dot(w_dot) * h_rate) / n;

  // Yaw channel. y = b3 x c with heading c(psi); b2 = y / ||y||.
  const double cy = std::cos(flat.yaw), sy = std::sin(flat.yaw);
  const Vec3 c(cy, sy, 0.0);
  const Vec3 c_perp(-sy, cy, 0.0);  // e3 x c
  const Vec3 c_dot = flat.yaw_rate * c_perp;
  const Vec3 c_ddot = flat.yaw_accel * c_perp - flat.yaw_rate * flat.yaw_rate * c;
  const Vec3 y = b3.cross(c);
  const double y_norm = y.norm();
  const Vec3 y_dot = h_rate.cross(c) + b3.cross(c_dot);
  const Vec3 y_ddot = b3_ddot.cross(c) + 2.0 * h_rate.cross(c_dot) + b3.cross(c_ddot);

  DesiredAttitude out;
  out.attitude = rd;
  out.rate.x() = -h_rate.dot(b2);
  out.rate.y() = h_rate.dot(b1);
  out.rate.z() = -b1.dot(y_dot) / y_norm;

  const Vec3 wd = rd * out.rate;
  const Vec3 h_accel = b3_ddot - wd.cross(wd.cross(b3));
  // b1' = R_d (Omega_d x e1) = Omega_3 b2 - Omega_2 b3
  const Vec3 b1_dot = out.rate.z() * b2 - out.rate.y() * b3;
  const double y_norm_dot = b2.dot(y_dot);
  out.accel.x() = -h_accel.dot(b2);
  out.accel.y() = h_accel.dot(b1);
  out.accel.z() = -(b1_dot.dot(y_dot) + b1.dot(y_ddot)) / y_norm +
                  b1.dot(y_dot) * y_norm_dot / (y_norm * y_norm);
  return out;
}

inline AttitudeErrors attitude_errors(const Rotation& r, const Rotation& rd, const Vec3& rate,
                                      const Vec3& desired_rate) {
  const Mat3& rm = r.matrix();
  const Mat3& rdm = rd.matrix();
  AttitudeErrors e;
  const Mat3 diff = rdm.transpose() * rm - rm.transpose() * rdm;
  e.rotation = 0.5 * Vec3(diff(2, 1), diff(0, 2), diff(1, 0));
  e.rate = rate - rm.transpose() * rdm * desired_rate;
  return e;
}

inline Vec3 moment_command(const AttitudeErrors& e, const Rotation& r, const Vec3& rate,
                           const DesiredAttitude& desired, const GeometricGains& gains,
                           const PhysicalParams& phys) {
  const Mat3 rel = r.matrix().transpose() * desired.attitude.matrix();
  const Mat3& j = phys.inertia;
  return -gains.kr * e.rotation - gains.kw * e.rate + rate.cross(j * rate) -
         j * (hat(rate) * rel * desired.rate - rel * desired.accel);
}

/// Full controller evaluation. Propagates DegenerateForce, SingularYawAxis
/// and SmallFeedforwardDenominator.
inline ControlOutput control(const QuadState& x, const FlatOutput& flat,
                             const GeometricGains& gains, const PhysicalParams& phys) {
  ControlOutput out;
  out.desired_force = desired_force(flat, x, gains, phys);
  out.input.thrust = thrust_command(out.desired_force, x.attitude);
  const Rotation rd = desired_attitude(out.desired_force, flat.yaw);
  out.desired = desired_angular_rates(flat, rd, phys.gravity);
  out.errors = attitude_errors(x.attitude, rd, x.body_rate, out.desired.rate);
  out.input.moment = moment_command(out.errors, x.attitude, x.body_rate, out.desired, gains, phys);
  return out;
}

/// The state that sits exactly on the reference at time t: p = p_d, v = v_d,
/// R = R_d of the feedforward force and Omega = Omega_d.
inline QuadState on_trajectory_state(const FlatOutput& flat, const PhysicalParams& phys) {
  QuadState x;
  x.position = flat.position;
  x.velocity = flat.velocity;
  const Vec3 force = phys.mass * (flat.acceleration - phys.gravity * kE3);
  x.attitude = desired_attitude(force, flat.yaw);
  x.body_rate = desired_angular_rates(flat, x.attitude, phys.gravity).rate;
  return x;
}

}  // namespace geometric
}  // namespace l1quad
