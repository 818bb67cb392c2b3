#pragma once

// Uncertain quadrotor dynamics in NED coordinates.
//
//   p' = v
//   v' = g e3 - (beta_f f + sigma_m1) / m * R e3 + (sigma_um1 R e1 + sigma_um2 R e2) / m
//   R' = R hat(Omega)
//   Omega' = J^-1 (beta_M .* M + sigma_m(2..4) - Omega x J Omega)
//
// In partial-state form z = [v; Omega]:
//   z' = f(z) + B(R) (u + sigma_m) + B_perp(R) sigma_um
// with B = [[-R e3 / m, 0], [0, J^-1]] and B_perp = [[R e1 / m, R e2 / m], [0, 0]].

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "l1quad/error.hpp"
#include "l1quad/geometry.hpp"
#include "l1quad/signal.hpp"

namespace l1quad {

using Vec4 = Eigen::Vector4d;
using Vec2 = Eigen::Vector2d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat64 = Eigen::Matrix<double, 6, 4>;
using Mat62 = Eigen::Matrix<double, 6, 2>;

struct PhysicalParams {
  double mass = 0.075;
  Mat3 inertia = 1e-5 * Vec3(5.8, 7.2, 10.0).asDiagonal().toDenseMatrix();
  double gravity = 9.81;

  double hover_thrust() const { return mass * gravity; }

  void validate() const {
    if (!(mass > 0.0) || !(gravity > 0.0)) {
      throw Error(ErrorCode::InvalidParams, "mass and gravity must be positive");
    }
    if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-15 ||
        inertia.llt().info() != Eigen::Success) {
      throw Error(ErrorCode::InvalidParams, "inertia must be symmetric positive definite");
    }
  }
};

/// X-configuration mixer. Motor i sits at (x_i, y_i) = l/sqrt(2) * (sx_i, sy_i)
/// in the body frame (forward, right, down) and spins with yaw sign s_i:
///   1: front-right (+,+) s=+1    2: rear-left  (-,-) s=+1
///   3: front-left  (+,-) s=-1    4: rear-right (-,+) s=-1
struct MixerParams {
  double arm_length = 0.04;
  double torque_coefficient = 0.01;

  /// Maps motor thrusts [T1..T4] to [f, Mx, My, Mz].
  Mat4 allocation() const {
    const double d = arm_length / std::sqrt(2.0);
    const double c = torque_coefficient;
    static constexpr double sx[4] = {1.0, -1.0, 1.0, -1.0};
    static constexpr double sy[4] = {1.0, -1.0, -1.0, 1.0};
    static constexpr double yaw[4] = {1.0, 1.0, -1.0, -1.0};
    Mat4 a;
    for (int i = 0; i < 4; ++i) {
      a(0, i) = 1.0;
      a(1, i) = -d * sy[i];  // thrust along -b3 at +y rolls left
      a(2, i) = d * sx[i];
      a(3, i) = c * yaw[i];
    }
    return a;
  }
};

struct QuadState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Rotation attitude;
  Vec3 body_rate = Vec3::Zero();

  /// Partial state z = [v; Omega].
  Vec6 partial() const {
    Vec6 z;
    z << velocity, body_rate;
    return z;
  }
};

struct ControlInput {
  double thrust = 0.0;
  Vec3 moment = Vec3::Zero();

  Vec4 as_vector() const { return Vec4(thrust, moment.x(), moment.y(), moment.z()); }
  static ControlInput from_vector(const Vec4& u) { return {u(0), u.tail<3>()}; }
};

struct UncertaintySpec {
  std::array<Signal, 4> matched;         // [thrust N, roll N m, pitch N m, yaw N m]
  std::array<Signal, 2> unmatched;       // [N, N]
  std::array<Signal, 4> gain_deviation;  // beta_i = 1 + signal
  std::array<Signal, 3> force;           // inertial-frame force F_0 [N]
  std::array<Signal, 3> moment;          // body-frame moment M_0 [N m]
  Vec4 effectiveness = Vec4::Ones();     // lambda_i, applied per motor
  double t_on = 0.0;
  double t_off = std::numeric_limits<double>::infinity();

  bool active(double t) const { return t >= t_on && t <= t_off; }
};

struct UncertaintyValue {
  Vec4 matched = Vec4::Zero();
  Vec2 unmatched = Vec2::Zero();

  Vec6 stacked() const {
    Vec6 s;
    s << matched, unmatched;
    return s;
  }
};

struct InputMatrices {
  Mat64 b;
  Mat62 b_perp;
  Mat6 b_bar;
};

struct StateDerivative {
  Vec3 position;
  Vec3 velocity;
  Mat3 attitude;
  Vec3 body_rate;
};

namespace plant {

constexpr double kDivergenceBound = 1e6;

inline InputMatrices input_matrices(const Rotation& r, const PhysicalParams& phys) {
  const Mat3& rm = r.matrix();
  const double inv_m = 1.0 / phys.mass;
  InputMatrices out;
  out.b.setZero();
  out.b.block<3, 1>(0, 0) = -inv_m * rm.col(2);
  out.b.block<3, 3>(3, 1) = phys.inertia.inverse();
  out.b_perp.setZero();
  out.b_perp.block<3, 1>(0, 0) = inv_m * rm.col(0);
  out.b_perp.block<3, 1>(0, 1) = inv_m * rm.col(1);
  out.b_bar << out.b, out.b_perp;
  return out;
}

/// Closed-form inverse of B_bar = [B B_perp]. For w = [w_v; w_Omega]:
///   sigma_m1 = -m (R^T w_v)_3, sigma_m(2..4) = J w_Omega,
///   sigma_um = m [(R^T w_v)_1, (R^T w_v)_2].
inline Mat6 b_bar_inverse(const Rotation& r, const PhysicalParams& phys) {
  const Mat3 rt = r.matrix().transpose();
  const double m = phys.mass;
  Mat6 inv = Mat6::Zero();
  inv.block<1, 3>(0, 0) = -m * rt.row(2);
  inv.block<3, 3>(1, 3) = phys.inertia;
  inv.block<1, 3>(4, 0) = m * rt.row(0);
  inv.block<1, 3>(5, 0) = m * rt.row(1);
  return inv;
}

/// Total matched and unmatched uncertainty at (t, x). The physical force
/// enters through sigma_m1 = -F_0 . (R e3), so that B(R) sigma_m + B_perp(R) sigma_um
/// reproduces +F_0 / m in v'.
inline UncertaintyValue evaluate_uncertainty(const UncertaintySpec& spec, double t,
                                             const QuadState& x) {
  UncertaintyValue out;
  if (!spec.active(t)) {
    return out;
  }
  const Vec3& p = x.position;
  for (int i = 0; i < 4; ++i) out.matched(i) = spec.matched[i].evaluate(t, p);
  for (int i = 0; i < 2; ++i) out.unmatched(i) = spec.unmatched[i].evaluate(t, p);

  const Vec3 f0(spec.force[0].evaluate(t, p), spec.force[1].evaluate(t, p),
                spec.force[2].evaluate(t, p));
  const Vec3 m0(spec.moment[0].evaluate(t, p), spec.moment[1].evaluate(t, p),
                spec.moment[2].evaluate(t, p));
  const Mat3& rm = x.attitude.matrix();
  out.matched(0) += -f0.dot(rm.col(2));
  out.matched.tail<3>() += m0;
  out.unmatched(0) += f0.dot(rm.col(0));
  out.unmatched(1) += f0.dot(rm.col(1));
  return out;
}

inline Vec4 input_gain(const UncertaintySpec& spec, double t, const QuadState& x) {
  Vec4 beta = Vec4::Ones();
  if (!spec.active(t)) return beta;
  for (int i = 0; i < 4; ++i) beta(i) += spec.gain_deviation[i].evaluate(t, x.position);
  return beta;
}

inline Vec4 effectiveness(const UncertaintySpec& spec, double t) {
  return spec.active(t) ? spec.effectiveness : Vec4::Ones();
}

/// Splits the wrench into motor thrusts, scales each by lambda_i and
/// recombines. The identity when lambda = 1.
inline ControlInput apply_effectiveness(const MixerParams& mix, const Vec4& lambda,
                                        const ControlInput& u) {
  if ((lambda.array() == 1.0).all()) {
    return u;
  }
  const Mat4 a = mix.allocation();
  const Vec4 motors = a.partialPivLu().solve(u.as_vector());
  return ControlInput::from_vector(a * lambda.cwiseProduct(motors));
}

inline StateDerivative derivative(const QuadState& x, const ControlInput& u,
                                  const Vec4& sigma_m, const Vec2& sigma_um, const Vec4& beta,
                                  const PhysicalParams& phys) {
  const Mat3& rm = x.attitude.matrix();
  const Vec3& w = x.body_rate;
  StateDerivative d;
  d.position = x.velocity;
  d.velocity = phys.gravity * kE3 -
               (beta(0) * u.thrust + sigma_m(0)) / phys.mass * rm.col(2) +
               (sigma_um(0) * rm.col(0) + sigma_um(1) * rm.col(1)) / phys.mass;
  d.attitude = rm * hat(w);
  const Vec3 torque = beta.tail<3>().cwiseProduct(u.moment) + sigma_m.tail<3>() -
                      w.cross(phys.inertia * w);
  d.body_rate = phys.inertia.llt().solve(torque);
  return d;
}

namespace detail {

inline void check_finite(const QuadState& x) {
  const bool bad = !x.position.allFinite() || !x.velocity.allFinite() ||
                   !x.body_rate.allFinite() || !x.attitude.matrix().allFinite() ||
                   x.position.cwiseAbs().maxCoeff() > kDivergenceBound ||
                   x.velocity.cwiseAbs().maxCoeff() > kDivergenceBound ||
                   x.body_rate.cwiseAbs().maxCoeff() > kDivergenceBound;
  if (bad) {
    throw Error(ErrorCode::NumericalDivergence, "state left the finite/bounded region");
  }
}

}  // namespace detail

/// One integration step of length dt with the input held constant.
///
/// Runge-Kutta-Munthe-Kaas of order 4: classical RK4 on (p, v, Omega, xi)
/// where the attitude is R_n exp(hat(xi)) and xi' = Jr(xi)^-1 Omega. The step
/// ends with R_{n+1} = R_n exp(hat(xi_{n+1})), re-orthonormalized. Uncertainty
/// channels are evaluated at the stage times and stage states.
inline QuadState step(const QuadState& x, const ControlInput& u, const UncertaintySpec& spec,
                      const PhysicalParams& phys, const MixerParams& mix, double t, double dt) {
  if (!(dt > 0.0) || dt > 0.01) {
    std::ostringstream os;
    os << "dt = " << dt << " outside (0, 0.01]";
    throw Error(ErrorCode::InvalidParams, os.str());
  }

  struct Rate {
    Vec3 p, v, w, xi;
  };

  auto stage_state = [&](const Vec3& dp, const Vec3& dv, const Vec3& dw, const Vec3& xi) {
    QuadState s;
    s.position = x.position + dp;
    s.velocity = x.velocity + dv;
    s.body_rate = x.body_rate + dw;
    s.attitude = x.attitude * exp_so3(xi);
    return s;
  };

  auto rate = [&](const QuadState& s, const Vec3& xi, double ts) {
    const UncertaintyValue sigma = evaluate_uncertainty(spec, ts, s);
    const Vec4 beta = input_gain(spec, ts, s);
    const ControlInput applied = apply_effectiveness(mix, effectiveness(spec, ts), u);
    const StateDerivative d = derivative(s, applied, sigma.matched, sigma.unmatched, beta, phys);
    return Rate{d.position, d.velocity, d.body_rate, right_jacobian_inverse(xi) * s.body_rate};
  };

  const Vec3 zero = Vec3::Zero();
  const Rate k1 = rate(x, zero, t);

  const Vec3 xi2 = 0.5 * dt * k1.xi;
  const Rate k2 = rate(stage_state(0.5 * dt * k1.p, 0.5 * dt * k1.v, 0.5 * dt * k1.w, xi2), xi2,
                       t + 0.5 * dt);

  const Vec3 xi3 = 0.5 * dt * k2.xi;
  const Rate k3 = rate(stage_state(0.5 * dt * k2.p, 0.5 * dt * k2.v, 0.5 * dt * k2.w, xi3), xi3,
                       t + 0.5 * dt);

  const Vec3 xi4 = dt * k3.xi;
  const Rate k4 = rate(stage_state(dt * k3.p, dt * k3.v, dt * k3.w, xi4), xi4, t + dt);

  const double h6 = dt / 6.0;
  QuadState next;
  next.position = x.position + h6 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
  next.velocity = x.velocity + h6 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  next.body_rate = x.body_rate + h6 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
  const Vec3 xi = h6 * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi);
  detail::check_finite(next);
  if (!xi.allFinite()) {
    throw Error(ErrorCode::NumericalDivergence, "attitude increment is not finite");
  }
  next.attitude = orthonormalize((x.attitude * exp_so3(xi)).matrix());
  return next;
}

}  // namespace plant
}  // namespace l1quad
