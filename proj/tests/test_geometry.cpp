#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "l1quad/geometry.hpp"
#include "test_support.hpp"

namespace l1quad {
namespace {

using testing::Random;
constexpr double kPi = std::numbers::pi;

TEST(Hat, UnitX) {
  Mat3 expected;
  expected << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  EXPECT_EQ(hat(Vec3(1, 0, 0)), expected);
}

TEST(Hat, ZeroVector) { EXPECT_EQ(hat(Vec3::Zero()), Mat3::Zero()); }

TEST(Hat, MatchesCrossProduct) {
  const Vec3 a(1, 2, 3), b(4, 5, 6);
  EXPECT_EQ(hat(a) * b, Vec3(-3, 6, -3));
}

TEST(Hat, IsSkewSymmetric) {
  Random rng;
  for (int i = 0; i < 200; ++i) {
    const Mat3 m = hat(rng.vec3(-10, 10));
    EXPECT_EQ(m + m.transpose(), Mat3::Zero());
  }
}

TEST(Hat, Antisymmetry) {
  Random rng;
  for (int i = 0; i < 200; ++i) {
    const Vec3 a = rng.vec3(), b = rng.vec3();
    EXPECT_LE((hat(a) * b + hat(b) * a).norm(), 1e-15);
    EXPECT_LE((hat(a) * b - a.cross(b)).norm(), 1e-15);
  }
}

TEST(Vee, InvertsHat) {
  EXPECT_EQ(vee(hat(Vec3(1, 2, 3))), Vec3(1, 2, 3));
  EXPECT_EQ(vee(Mat3::Zero()), Vec3::Zero());
}

TEST(Vee, RoundTripProperty) {
  Random rng;
  for (int i = 0; i < 500; ++i) {
    const Vec3 v = rng.vec3(-100, 100);
    EXPECT_EQ(vee(hat(v)), v);
  }
}

TEST(Vee, RejectsSymmetricPerturbation) {
  Mat3 m = hat(Vec3(1, 2, 3));
  m(0, 1) += 1e-3;
  m(1, 0) += 1e-3;
  EXPECT_ERROR_CODE(vee(m), ErrorCode::NotSkewSymmetric);
}

TEST(Vee, ToleratesRoundoff) {
  Mat3 m = hat(Vec3(1, 2, 3));
  m(0, 0) = 5e-10;
  EXPECT_NO_THROW(vee(m));
}

TEST(ExpSO3, ZeroIsIdentity) { EXPECT_EQ(exp_so3(Vec3::Zero()).matrix(), Mat3::Identity()); }

TEST(ExpSO3, QuarterTurnAboutZ) {
  Mat3 expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LE((exp_so3(Vec3(0, 0, kPi / 2)).matrix() - expected).norm(), 1e-15);
}

TEST(ExpSO3, GroupInverse) {
  const Vec3 v(0.1, 0.2, 0.3);
  EXPECT_LE(((exp_so3(v) * exp_so3(-v)).matrix() - Mat3::Identity()).norm(), 1e-15);
}

TEST(ExpSO3, MatchesAxisAngleOracle) {
  Random rng;
  for (int i = 0; i < 300; ++i) {
    const Vec3 axis = rng.vec3().normalized();
    const double angle = rng.uniform(0.0, 4.0 * kPi);
    const Mat3 r = exp_so3(angle * axis).matrix();
    EXPECT_LE((r - testing::axis_angle(axis, angle)).norm(), 1e-13);
  }
}

TEST(ExpSO3, SmallAngleBranchIsContinuous) {
  const Vec3 axis = Vec3(1, -2, 0.5).normalized();
  const Mat3 below = exp_so3(0.99e-8 * axis).matrix();
  const Mat3 above = exp_so3(1.01e-8 * axis).matrix();
  EXPECT_LE((below - above).norm(), 1e-9);
  EXPECT_LE((below - testing::axis_angle(axis, 0.99e-8)).norm(), 1e-15);
}

TEST(ExpSO3, OutputSatisfiesRotationInvariants) {
  Random rng;
  for (int i = 0; i < 500; ++i) {
    const Vec3 v = rng.vec3().normalized() * rng.uniform(0.0, 4.0 * kPi);
    const Mat3 r = exp_so3(v).matrix();
    EXPECT_LE(orthogonality_defect(r), 1e-9);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-9);
    EXPECT_NO_THROW(Rotation::from_matrix(r));
  }
}

TEST(Rotation, FromMatrixRejectsNonRotations) {
  EXPECT_ERROR_CODE(Rotation::from_matrix(2.0 * Mat3::Identity()), ErrorCode::NotOnSO3);
  EXPECT_ERROR_CODE(Rotation::from_matrix(-Mat3::Identity()), ErrorCode::NotOnSO3);
  Mat3 nan = Mat3::Identity();
  nan(1, 2) = std::nan("");
  EXPECT_ERROR_CODE(Rotation::from_matrix(nan), ErrorCode::NotOnSO3);
}

TEST(Euler, ZeroIsIdentity) {
  EXPECT_EQ(euler_to_rotation({0, 0, 0}).matrix(), Mat3::Identity());
}

TEST(Euler, QuarterYaw) {
  Mat3 expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LE((euler_to_rotation({kPi / 2, 0, 0}).matrix() - expected).norm(), 1e-15);
}

TEST(Euler, ComposesZYX) {
  const EulerZYX e{0.3, -0.2, 0.1};
  const Mat3 expected = testing::axis_angle(kE3, e.yaw) * testing::axis_angle(kE2, e.pitch) *
                        testing::axis_angle(kE1, e.roll);
  EXPECT_LE((euler_to_rotation(e).matrix() - expected).norm(), 1e-15);
}

TEST(Euler, RoundTrip) {
  const EulerZYX e = rotation_to_euler(euler_to_rotation({0.3, -0.2, 0.1}));
  EXPECT_NEAR(e.yaw, 0.3, 1e-12);
  EXPECT_NEAR(e.pitch, -0.2, 1e-12);
  EXPECT_NEAR(e.roll, 0.1, 1e-12);
}

TEST(Euler, RoundTripProperty) {
  Random rng;
  for (int i = 0; i < 1000; ++i) {
    const EulerZYX e{rng.uniform(-kPi + 1e-6, kPi - 1e-6), rng.uniform(-1.4, 1.4),
                     rng.uniform(-kPi + 1e-6, kPi - 1e-6)};
    const EulerZYX back = rotation_to_euler(euler_to_rotation(e));
    EXPECT_NEAR(back.yaw, e.yaw, 1e-12);
    EXPECT_NEAR(back.pitch, e.pitch, 1e-12);
    EXPECT_NEAR(back.roll, e.roll, 1e-12);
  }
}

TEST(Euler, GimbalLock) {
  EXPECT_ERROR_CODE(rotation_to_euler(euler_to_rotation({0.2, kPi / 2, 0.1})),
                    ErrorCode::GimbalLock);
  EXPECT_ERROR_CODE(rotation_to_euler(euler_to_rotation({0.0, -kPi / 2, 0.0})),
                    ErrorCode::GimbalLock);
  EXPECT_NO_THROW(rotation_to_euler(euler_to_rotation({0.0, 1.5, 0.0})));
}

TEST(Orthonormalize, SmallPerturbationMatchesPolarOracle) {
  Mat3 m = Mat3::Identity();
  m(0, 1) = 1e-6;
  m(2, 0) = -1e-6;
  m(1, 2) = 1e-6;
  const Mat3 r = orthonormalize(m).matrix();
  EXPECT_LE(orthogonality_defect(r), 1e-12);
  EXPECT_LE((r - testing::polar_rotation(m)).norm(), 1e-12);
}

TEST(Orthonormalize, Idempotent) {
  Random rng;
  for (int i = 0; i < 200; ++i) {
    const Rotation r = rng.rotation();
    EXPECT_LE((orthonormalize(r.matrix()).matrix() - r.matrix()).norm(), 1e-14);
  }
}

TEST(Orthonormalize, MatchesPolarOracleProperty) {
  Random rng;
  for (int i = 0; i < 200; ++i) {
    const Mat3 m = rng.rotation().matrix() + 0.02 * Mat3::Random();
    if (orthogonality_defect(m) > 0.2) continue;
    EXPECT_LE((orthonormalize(m).matrix() - testing::polar_rotation(m)).norm(), 1e-12);
  }
}

TEST(Orthonormalize, RejectsFarMatrices) {
  Mat3 m = Mat3::Identity();
  m(0, 0) = std::sqrt(1.5);  // ||M^T M - I||_F = 0.5
  ASSERT_NEAR(orthogonality_defect(m), 0.5, 1e-12);
  EXPECT_ERROR_CODE(orthonormalize(m), ErrorCode::TooFarFromSO3);
  EXPECT_ERROR_CODE(orthonormalize(-Mat3::Identity()), ErrorCode::TooFarFromSO3);
}

TEST(RightJacobianInverse, MapsBodyRateToCoordinateRate) {
  Random rng;
  for (int i = 0; i < 100; ++i) {
    const Vec3 xi = rng.vec3(-1.0, 1.0);
    const Vec3 w = rng.vec3();
    const double h = 1e-6;
    const Vec3 xi_next = xi + h * right_jacobian_inverse(xi) * w;
    const Mat3 lhs = exp_so3(xi_next).matrix();
    const Mat3 rhs = (exp_so3(xi) * exp_so3(h * w)).matrix();
    EXPECT_LE((lhs - rhs).norm(), 1e-11);
  }
}

}  // namespace
}  // namespace l1quad
