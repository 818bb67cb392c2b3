#pragma once

// L1 adaptive augmentation on the partial state z = [v; Omega].
//
// Per sample period Ts:
//   z_tilde   = z_hat - z
//   sigma_hat = -B_bar(R)^-1 Phi^-1 exp(As Ts) z_tilde,  Phi = As^-1 (exp(As Ts) - I)
//   u_ad      = -C(s) sigma_hat_m      (first-order thrust filter, two cascaded
//                                       first-order stages per moment channel)
//   z_hat'    = f(z) + B(R)(u_b + u_ad + sigma_hat_m) + B_perp(R) sigma_hat_um + As z_tilde
// with As diagonal Hurwitz, so every matrix function above is elementwise.
// Within a period the measured z in z_tilde is carried forward along the
// nominal model, z + tau (f(z) + B(R)(u_b + u_ad)).

#include <cmath>
#include <sstream>

#include "l1quad/error.hpp"
#include "l1quad/geometry.hpp"
#include "l1quad/plant.hpp"

namespace l1quad {

struct L1Params {
  Vec6 hurwitz_diagonal = (Vec6() << -5.0, -5.0, -5.0, -10.0, -10.0, -10.0).finished();
  double sample_time = 0.005;
  double thrust_bandwidth = 8.0;
  double moment_bandwidth_1 = 4.0;
  double moment_bandwidth_2 = 6.0;

  void validate() const {
    if (!hurwitz_diagonal.allFinite() || !(hurwitz_diagonal.array() < 0.0).all()) {
      throw Error(ErrorCode::InvalidParams, "As diagonal entries must be strictly negative");
    }
    if (!(sample_time > 0.0)) {
      throw Error(ErrorCode::InvalidParams, "Ts must be positive");
    }
    if (!(thrust_bandwidth > 0.0) || !(moment_bandwidth_1 > 0.0) || !(moment_bandwidth_2 > 0.0)) {
      throw Error(ErrorCode::InvalidParams, "filter bandwidths must be positive");
    }
  }
};

/// Discrete first-order low-pass y+ = a y + (1 - a) x, a = exp(-w Ts).
/// Exact zero-order-hold discretization of w / (s + w).
class FirstOrderLowPass {
 public:
  FirstOrderLowPass() = default;
  FirstOrderLowPass(double bandwidth, double sample_time)
      : decay_(std::exp(-bandwidth * sample_time)) {}

  double update(double input) {
    output_ = decay_ * output_ + (1.0 - decay_) * input;
    return output_;
  }

  double output() const { return output_; }
  double decay() const { return decay_; }
  void reset(double value = 0.0) { output_ = value; }

 private:
  double decay_ = 0.0;
  double output_ = 0.0;
};

struct L1State {
  Vec6 z_hat = Vec6::Zero();
  Vec6 sigma_hat = Vec6::Zero();
  Vec6 z_tilde = Vec6::Zero();
  FirstOrderLowPass thrust_filter;
  std::array<FirstOrderLowPass, 3> moment_stage_1;
  std::array<FirstOrderLowPass, 3> moment_stage_2;
  Vec4 u_ad = Vec4::Zero();

  // exp(As Ts) and Phi^-1 exp(As Ts), both diagonal.
  Vec6 transition = Vec6::Zero();
  Vec6 adaptation_gain = Vec6::Zero();
};

namespace l1 {

/// Diagonal of Phi = As^-1 (exp(As Ts) - I).
inline Vec6 phi_diagonal(const L1Params& params) {
  Vec6 phi;
  for (int i = 0; i < 6; ++i) {
    const double a = params.hurwitz_diagonal(i);
    phi(i) = std::expm1(a * params.sample_time) / a;
  }
  return phi;
}

inline Vec6 transition_diagonal(const L1Params& params) {
  return (params.hurwitz_diagonal * params.sample_time).array().exp().matrix();
}

inline L1State init(const L1Params& params, const Vec6& z0) {
  params.validate();
  L1State s;
  s.z_hat = z0;
  s.transition = transition_diagonal(params);
  s.adaptation_gain = s.transition.cwiseQuotient(phi_diagonal(params));
  s.thrust_filter = FirstOrderLowPass(params.thrust_bandwidth, params.sample_time);
  for (int i = 0; i < 3; ++i) {
    s.moment_stage_1[i] = FirstOrderLowPass(params.moment_bandwidth_1, params.sample_time);
    s.moment_stage_2[i] = FirstOrderLowPass(params.moment_bandwidth_2, params.sample_time);
  }
  return s;
}

/// Piecewise-constant adaptation law.
inline Vec6 adaptation_update(const Vec6& z_tilde, const Rotation& r, const L1Params& params,
                              const PhysicalParams& phys) {
  const Vec6 gain = transition_diagonal(params).cwiseQuotient(phi_diagonal(params));
  return -plant::b_bar_inverse(r, phys) * gain.cwiseProduct(z_tilde);
}

namespace detail {

inline Vec6 adaptation_update(const L1State& s, const Vec6& z_tilde, const Rotation& r,
                              const PhysicalParams& phys) {
  return -plant::b_bar_inverse(r, phys) * s.adaptation_gain.cwiseProduct(z_tilde);
}

}  // namespace detail

/// Advances z_hat by one period with RK4, holding R, the inputs and sigma_hat
/// constant. The measured z is extrapolated along the nominal model, so a
/// plant that follows the nominal model exactly leaves z_tilde at zero.
inline Vec6 predictor_step(const L1State& s, const Vec6& z, const Rotation& r, const Vec4& u_b,
                           const Vec4& u_ad, const L1Params& params, const PhysicalParams& phys,
                           double dt) {
  const InputMatrices mats = plant::input_matrices(r, phys);
  const Vec3 w = z.tail<3>();
  Vec6 drift;
  drift << phys.gravity * kE3, -phys.inertia.llt().solve(w.cross(phys.inertia * w));
  const Vec6 nominal = drift + mats.b * (u_b + u_ad);
  const Vec6 forcing = nominal + mats.b * s.sigma_hat.head<4>() +
                       mats.b_perp * s.sigma_hat.tail<2>();
  const Vec6& as = params.hurwitz_diagonal;

  auto rhs = [&](double tau, const Vec6& z_hat) -> Vec6 {
    return forcing + as.cwiseProduct(z_hat - (z + tau * nominal));
  };
  const Vec6 k1 = rhs(0.0, s.z_hat);
  const Vec6 k2 = rhs(0.5 * dt, s.z_hat + 0.5 * dt * k1);
  const Vec6 k3 = rhs(0.5 * dt, s.z_hat + 0.5 * dt * k2);
  const Vec6 k4 = rhs(dt, s.z_hat + dt * k3);
  const Vec6 next = s.z_hat + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) {
    throw Error(ErrorCode::NumericalDivergence, "predictor state is not finite");
  }
  return next;
}

/// Filters the matched estimate and returns u_ad = -C(s) sigma_hat_m.
inline Vec4 filter_step(L1State& s, const Vec4& sigma_m) {
  Vec4 filtered;
  filtered(0) = s.thrust_filter.update(sigma_m(0));
  for (int i = 0; i < 3; ++i) {
    const double first = s.moment_stage_1[i].update(sigma_m(i + 1));
    filtered(i + 1) = s.moment_stage_2[i].update(first);
  }
  s.u_ad = -filtered;
  return s.u_ad;
}

/// One sample of the augmentation: adapt, filter, then propagate the
/// predictor with the new estimate and the new u_ad. Call exactly once per Ts.
inline Vec4 step(L1State& s, const Vec6& z, const Rotation& r, const Vec4& u_b,
                 const L1Params& params, const PhysicalParams& phys) {
  s.z_tilde = s.z_hat - z;
  s.sigma_hat = detail::adaptation_update(s, s.z_tilde, r, phys);
  const Vec4 u_ad = filter_step(s, s.sigma_hat.head<4>());
  s.z_hat = predictor_step(s, z, r, u_b, u_ad, params, phys, params.sample_time);
  return u_ad;
}

}  // namespace l1
}  // namespace l1quad
