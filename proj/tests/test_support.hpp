#pragma once

// Seeded random draws and independent numerical oracles shared by the tests.

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "l1quad/error.hpp"
#include "l1quad/geometry.hpp"

// Passes when `stmt` throws l1quad::Error carrying `expected`.
#define EXPECT_ERROR_CODE(stmt, expected)                                  \
  do {                                                                     \
    try {                                                                  \
      stmt;                                                                \
      ADD_FAILURE() << "expected " << ::l1quad::to_string(expected);       \
    } catch (const ::l1quad::Error& e_) {                                  \
      EXPECT_EQ(e_.code(), expected) << e_.what();                         \
    }                                                                      \
  } while (0)

namespace l1quad::testing {

class Random {
 public:
  explicit Random(unsigned long seed = 20240611) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  Vec3 vec3(double lo = -1.0, double hi = 1.0) {
    return Vec3(uniform(lo, hi), uniform(lo, hi), uniform(lo, hi));
  }

  /// Uniformly distributed rotation (Shoemake's quaternion sampling).
  Rotation rotation() {
    const double u1 = uniform(0.0, 1.0), u2 = uniform(0.0, 1.0), u3 = uniform(0.0, 1.0);
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const double tau = 2.0 * std::numbers::pi;
    const Eigen::Quaterniond q(b * std::cos(tau * u3), a * std::sin(tau * u2),
                               a * std::cos(tau * u2), b * std::sin(tau * u3));
    return Rotation::from_matrix(q.normalized().toRotationMatrix());
  }

 private:
  std::mt19937_64 engine_;
};

/// Nearest rotation in the Frobenius sense via SVD: U V^T.
inline Mat3 polar_rotation(const Mat3& m) {
  const Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

/// Rotation about a unit axis by angle, straight from Rodrigues' formula.
inline Mat3 axis_angle(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace l1quad::testing
