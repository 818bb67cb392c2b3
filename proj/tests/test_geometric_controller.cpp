#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "l1quad/geometric_controller.hpp"
#include "test_support.hpp"

namespace l1quad {
namespace {

using testing::Random;

const PhysicalParams kPhys;
const GeometricGains kGains;
constexpr double kMg = 0.075 * 9.81;

FlatOutput hover_at(const Vec3& p) { return trajectory::sample(TrajectorySpec::hover(p), 0.0); }

QuadState at(const Vec3& p) {
  QuadState x;
  x.position = p;
  return x;
}

TEST(Gains, Defaults) {
  EXPECT_EQ(kGains.kp.diagonal(), Vec3(0.62, 0.45, 0.69));
  EXPECT_EQ(kGains.kv.diagonal(), Vec3(0.1, 0.1, 0.15));
  EXPECT_EQ(kGains.kr.diagonal(), Vec3(0.015, 0.015, 0.002));
  EXPECT_EQ(kGains.kw.diagonal(), Vec3(0.0022, 0.0022, 0.0007));
  EXPECT_NO_THROW(kGains.validate());
}

TEST(Gains, Detuned) {
  const GeometricGains d = kGains.detuned();
  EXPECT_EQ(d.kp, 0.5 * kGains.kp);
  EXPECT_EQ(d.kr, 0.5 * kGains.kr);
  EXPECT_EQ(d.kv, kGains.kv);
  EXPECT_EQ(d.kw, kGains.kw);
}

TEST(Gains, RejectsIndefinite) {
  GeometricGains g;
  g.kv(1, 1) = -0.1;
  EXPECT_ERROR_CODE(g.validate(), ErrorCode::InvalidParams);
  g = GeometricGains{};
  g.kr(0, 2) = 0.001;
  EXPECT_ERROR_CODE(g.validate(), ErrorCode::InvalidParams);
}

TEST(DesiredForce, HoverWeight) {
  const Vec3 f = geometric::desired_force(hover_at(Vec3(0, 0, -1)), at(Vec3(0, 0, -1)), kGains, kPhys);
  EXPECT_LE((f - Vec3(0, 0, -0.73575)).norm(), 1e-15);
}

TEST(DesiredForce, PositionError) {
  const Vec3 f = geometric::desired_force(hover_at(Vec3::Zero()), at(Vec3(0.1, 0, 0)), kGains, kPhys);
  EXPECT_NEAR(f.x(), -0.062, 1e-15);
}

TEST(DesiredForce, AccelerationFeedforward) {
  FlatOutput flat = hover_at(Vec3::Zero());
  flat.acceleration = Vec3(0, 0, -1);
  const Vec3 f = geometric::desired_force(flat, at(Vec3::Zero()), kGains, kPhys);
  EXPECT_LE((f - Vec3(0, 0, -0.075 * (9.81 + 1))).norm(), 1e-15);
}

TEST(ThrustCommand, Examples) {
  EXPECT_NEAR(geometric::thrust_command(Vec3(0, 0, -0.73575), Rotation::identity()), 0.73575, 1e-15);
  EXPECT_EQ(geometric::thrust_command(Vec3(0.3, -0.2, 0), Rotation::identity()), 0.0);
  const Rotation roll30 = euler_to_rotation({0, 0, std::numbers::pi / 6});
  EXPECT_NEAR(geometric::thrust_command(Vec3(0, 0, -0.73575), roll30), 0.63718, 1e-5);
  EXPECT_NEAR(geometric::thrust_command(Vec3(0, 0, -0.73575), roll30),
              0.73575 * std::cos(std::numbers::pi / 6), 1e-15);
}

TEST(DesiredAttitude, HoverIsIdentity) {
  const Rotation rd = geometric::desired_attitude(Vec3(0, 0, -kMg), 0.0);
  EXPECT_LE((rd.matrix() - Mat3::Identity()).norm(), 1e-15);
}

TEST(DesiredAttitude, QuarterYaw) {
  const Rotation rd = geometric::desired_attitude(Vec3(0, 0, -kMg), std::numbers::pi / 2);
  EXPECT_LE((rd.col(0) - kE2).norm(), 1e-15);
  EXPECT_LE((rd.col(1) + kE1).norm(), 1e-15);
  EXPECT_LE((rd.col(2) - kE3).norm(), 1e-15);
}

TEST(DesiredAttitude, Degenerate) {
  EXPECT_ERROR_CODE(geometric::desired_attitude(Vec3::Zero(), 0.0), ErrorCode::DegenerateForce);
  EXPECT_ERROR_CODE(geometric::desired_attitude(Vec3(0, 0, -5e-7), 0.0), ErrorCode::DegenerateForce);
  EXPECT_ERROR_CODE(geometric::desired_attitude(Vec3(-1, 0, 0), 0.0), ErrorCode::SingularYawAxis);
  EXPECT_ERROR_CODE(geometric::desired_attitude(Vec3(0, 1, 0), std::numbers::pi / 2),
                    ErrorCode::SingularYawAxis);
}

TEST(DesiredAttitude, ThrustAxisAndOrthonormality) {
  Random rng;
  for (int i = 0; i < 500; ++i) {
    const Vec3 f = rng.vec3() + Vec3(0, 0, -1.2);
    const double yaw = rng.uniform(-3.0, 3.0);
    const Mat3 rd = geometric::desired_attitude(f, yaw).matrix();
    EXPECT_LE((rd.col(2) + f.normalized()).norm(), 1e-12);
    EXPECT_LE(orthogonality_defect(rd), 1e-12);
    EXPECT_NEAR(rd.determinant(), 1.0, 1e-12);
    // b1 lies in the vertical plane spanned by b3 and the heading.
    EXPECT_NEAR(rd.col(1).dot(Vec3(std::cos(yaw), std::sin(yaw), 0)), 0.0, 1e-12);
  }
}

TEST(DesiredRates, HoverIsZero) {
  const DesiredAttitude d =
      geometric::desired_angular_rates(hover_at(Vec3(0, 0, -1)), Rotation::identity(), 9.81);
  EXPECT_EQ(d.rate, Vec3::Zero());
  EXPECT_EQ(d.accel, Vec3::Zero());
}

TEST(DesiredRates, YawRateOnly) {
  FlatOutput flat = hover_at(Vec3(0, 0, -1));
  flat.yaw_rate = 0.5;
  const DesiredAttitude d = geometric::desired_angular_rates(flat, Rotation::identity(), 9.81);
  EXPECT_LE((d.rate - Vec3(0, 0, 0.5)).norm(), 1e-15);
}

TEST(DesiredRates, SmallDenominator) {
  FlatOutput flat = hover_at(Vec3::Zero());
  flat.acceleration = Vec3(0, 0, 9.81);
  EXPECT_ERROR_CODE(geometric::desired_angular_rates(flat, Rotation::identity(), 9.81),
                    ErrorCode::SmallFeedforwardDenominator);
  flat.acceleration = Vec3(0, 0, 0.91 * 9.81);
  EXPECT_ERROR_CODE(geometric::desired_angular_rates(flat, Rotation::identity(), 9.81),
                    ErrorCode::SmallFeedforwardDenominator);
}

// R_d(t) from the zero-error feedforward force, with a time-varying yaw.
struct Reference {
  TrajectorySpec spec;
  double yaw0 = 0.0, yaw_rate = 0.0, yaw_accel = 0.0;

  FlatOutput flat(double t) const {
    FlatOutput f = trajectory::sample(spec, t);
    f.yaw = yaw0 + yaw_rate * t + 0.5 * yaw_accel * t * t;
    f.yaw_rate = yaw_rate + yaw_accel * t;
    f.yaw_accel = yaw_accel;
    return f;
  }
  Mat3 rd(double t) const {
    const FlatOutput f = flat(t);
    return geometric::desired_attitude(kPhys.mass * (f.acceleration - 9.81 * kE3), f.yaw).matrix();
  }
  DesiredAttitude desired(double t) const {
    const FlatOutput f = flat(t);
    return geometric::desired_angular_rates(f, Rotation::from_matrix(rd(t)), 9.81);
  }
};

Vec3 finite_difference_rate(const Reference& ref, double t, double h) {
  const Mat3 dr = (ref.rd(t + h) - ref.rd(t - h)) / (2 * h);
  const Mat3 w = ref.rd(t).transpose() * dr;
  return Vec3(w(2, 1) - w(1, 2), w(0, 2) - w(2, 0), w(1, 0) - w(0, 1)) / 2.0;
}

TEST(DesiredRates, Figure8QuarterPeriodMatchesFiniteDifference) {
  const Reference ref{TrajectorySpec::figure8()};
  const double t = 17.0 / 4.0;
  const Vec3 fd = finite_difference_rate(ref, t, 1e-4);
  EXPECT_LE((ref.desired(t).rate - fd).norm(), 1e-3);
}

TEST(DesiredRates, RateAndAccelerationMatchFiniteDifferences) {
  TrajectorySpec fast = TrajectorySpec::tilted_figure8();
  fast.period = 6.0;
  const Reference refs[] = {
      {TrajectorySpec::figure8()},
      {TrajectorySpec::tilted_figure8(), 0.3},
      {fast, -0.4, 0.7, -0.3},
  };
  Random rng;
  const double h = 1e-4;
  for (const auto& ref : refs) {
    for (int i = 0; i < 40; ++i) {
      const double t = rng.uniform(0.1, 17.0);
      const DesiredAttitude d = ref.desired(t);
      const Vec3 fd_rate = finite_difference_rate(ref, t, h);
      const Vec3 fd_accel = (ref.desired(t + h).rate - ref.desired(t - h).rate) / (2 * h);
      EXPECT_LE((d.rate - fd_rate).norm(), 1e-7 * std::max(1.0, d.rate.norm()));
      EXPECT_LE((d.accel - fd_accel).norm(), 1e-6 * std::max(1.0, d.accel.norm()));
    }
  }
}

TEST(AttitudeErrors, ZeroAtReference) {
  Random rng;
  const Rotation r = rng.rotation();
  const AttitudeErrors e = geometric::attitude_errors(r, r, Vec3(1, 2, 3), Vec3(1, 2, 3));
  EXPECT_LE(e.rotation.norm(), 1e-15);
  EXPECT_LE(e.rate.norm(), 1e-14);
}

TEST(AttitudeErrors, RollOffset) {
  const Rotation r = euler_to_rotation({0, 0, 0.1});
  const AttitudeErrors e =
      geometric::attitude_errors(r, Rotation::identity(), Vec3::Zero(), Vec3::Zero());
  EXPECT_LE((e.rotation - Vec3(std::sin(0.1), 0, 0)).norm(), 1e-15);
  EXPECT_NEAR(e.rotation.x(), 0.0998334, 1e-7);
}

TEST(AttitudeErrors, RateError) {
  const AttitudeErrors e = geometric::attitude_errors(Rotation::identity(), Rotation::identity(),
                                                      Vec3::Zero(), Vec3(0, 0, 1));
  EXPECT_EQ(e.rate, Vec3(0, 0, -1));
}

TEST(AttitudeErrors, SwapNegatesRotationError) {
  Random rng;
  for (int i = 0; i < 200; ++i) {
    const Rotation a = rng.rotation(), b = rng.rotation();
    const Vec3 ab = geometric::attitude_errors(a, b, Vec3::Zero(), Vec3::Zero()).rotation;
    const Vec3 ba = geometric::attitude_errors(b, a, Vec3::Zero(), Vec3::Zero()).rotation;
    EXPECT_LE((ab + ba).norm(), 1e-14);
  }
}

TEST(MomentCommand, Examples) {
  const DesiredAttitude rest;
  EXPECT_EQ(geometric::moment_command({}, Rotation::identity(), Vec3::Zero(), rest, kGains, kPhys),
            Vec3::Zero());

  AttitudeErrors e;
  e.rotation = Vec3(0.1, 0, 0);
  const Vec3 m = geometric::moment_command(e, Rotation::identity(), Vec3::Zero(), rest, kGains, kPhys);
  EXPECT_LE((m - Vec3(-1.5e-3, 0, 0)).norm(), 1e-18);

  DesiredAttitude accel;
  accel.accel = Vec3(1, 0, 0);
  const Vec3 ff = geometric::moment_command({}, Rotation::identity(), Vec3::Zero(), accel, kGains, kPhys);
  EXPECT_LE((ff - Vec3(5.8e-5, 0, 0)).norm(), 1e-18);
}

TEST(Control, HoverFixedPoint) {
  const ControlOutput out =
      geometric::control(at(Vec3(0, 0, -1)), hover_at(Vec3(0, 0, -1)), kGains, kPhys);
  EXPECT_NEAR(out.input.thrust, 0.73575, 1e-15);
  EXPECT_EQ(out.input.moment, Vec3::Zero());
}

TEST(Control, DisplacedNorth) {
  const ControlOutput out =
      geometric::control(at(Vec3(0.1, 0, -1)), hover_at(Vec3(0, 0, -1)), kGains, kPhys);
  EXPECT_NEAR(out.input.thrust, 0.73575, 1e-15);
  // The desired thrust vector -b3d leans south, back toward the reference.
  const Vec3 thrust_dir = -out.desired.attitude.col(2);
  EXPECT_LT(thrust_dir.x(), 0.0);
  EXPECT_NEAR(thrust_dir.y(), 0.0, 1e-15);
  EXPECT_GT(out.errors.rotation.norm(), 0.0);
}

TEST(Control, Figure8StartIsFeedforwardOnly) {
  const FlatOutput flat = trajectory::sample(TrajectorySpec::figure8(), 0.0);
  const QuadState x = geometric::on_trajectory_state(flat, kPhys);
  const ControlOutput out = geometric::control(x, flat, kGains, kPhys);
  EXPECT_LE(out.input.moment.norm(), 1e-3);
  EXPECT_LE(out.errors.rotation.norm(), 1e-15);
  EXPECT_LE(out.errors.rate.norm(), 1e-15);
}

TEST(Control, PropagatesDegenerateForce) {
  FlatOutput flat = hover_at(Vec3::Zero());
  flat.acceleration = Vec3(0, 0, 9.81);
  EXPECT_ERROR_CODE(geometric::control(at(Vec3::Zero()), flat, kGains, kPhys),
                    ErrorCode::DegenerateForce);
}

// Baseline loop: 200 Hz control, 1 kHz plant with zero-order hold.
std::vector<double> closed_loop_errors(QuadState x, const TrajectorySpec& spec, double duration) {
  const UncertaintySpec none;
  const MixerParams mix;
  std::vector<double> errors;
  const int ticks = static_cast<int>(std::lround(duration * 200));
  for (int k = 0; k < ticks; ++k) {
    const double t = k / 200.0;
    const FlatOutput flat = trajectory::sample(spec, t);
    errors.push_back((x.position - flat.position).norm());
    const ControlInput u = geometric::control(x, flat, kGains, kPhys).input;
    for (int s = 0; s < 5; ++s) x = plant::step(x, u, none, kPhys, mix, t + s * 1e-3, 1e-3);
  }
  return errors;
}

TEST(ClosedLoop, HoverFixedPoint) {
  const auto errors = closed_loop_errors(at(Vec3(0, 0, -1)), TrajectorySpec::hover(Vec3(0, 0, -1)), 30.0);
  EXPECT_LE(*std::max_element(errors.begin(), errors.end()), 1e-6);
}

// Small-angle north-axis model: x'' = g theta, theta_d = -(kp x + kv x') / (m g),
// J theta'' = -kr (theta - theta_d) - kw theta'. Returns the slowest decay rate.
double linear_north_decay_rate() {
  const double m = kPhys.mass, g = kPhys.gravity, j = kPhys.inertia(1, 1);
  const double kp = kGains.kp(0, 0), kv = kGains.kv(0, 0), kr = kGains.kr(1, 1), kw = kGains.kw(1, 1);
  Eigen::Matrix4d a;
  a << 0, 1, 0, 0,
       0, 0, g, 0,
       0, 0, 0, 1,
       -kr * kp / (m * g * j), -kr * kv / (m * g * j), -kr / j, -kw / j;
  const Eigen::Vector4cd eig = a.eigenvalues();
  double rate = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) rate = std::min(rate, -eig(i).real());
  return rate;
}

TEST(ClosedLoop, LocalConvergenceFromOffset) {
  const double duration = 20.0;
  const auto errors =
      closed_loop_errors(at(Vec3(0.2, 0, -1)), TrajectorySpec::hover(Vec3(0, 0, -1)), duration);
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < errors.size(); ++i) {
    if (errors[i] > errors[i - 1] && errors[i] >= errors[i + 1]) peaks.push_back(i);
  }
  ASSERT_GE(peaks.size(), 10u);
  EXPECT_LT(errors[peaks.front()], errors.front());
  for (std::size_t i = 1; i < peaks.size(); ++i) EXPECT_LT(errors[peaks[i]], errors[peaks[i - 1]]);

  const double rate = linear_north_decay_rate();
  EXPECT_GT(rate, 0.0);
  const std::size_t first = peaks[1], last = peaks.back();
  const double measured = std::log(errors[first] / errors[last]) / ((last - first) / 200.0);
  EXPECT_NEAR(measured, rate, 0.25 * rate);
  EXPECT_LT(errors.back(), 0.5 * errors.front());
}

}  // namespace
}  // namespace l1quad
