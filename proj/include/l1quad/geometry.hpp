#pragma once

// SO(3) and 3-vector primitives shared by the plant and the controllers.
//
// Euler angles follow the Z-Y-X (yaw, pitch, roll) intrinsic sequence:
//   R = Rz(yaw) * Ry(pitch) * Rx(roll)
// and are recovered with
//   pitch = -asin(R(2,0)), roll = atan2(R(2,1), R(2,2)), yaw = atan2(R(1,0), R(0,0)).

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "l1quad/error.hpp"

namespace l1quad {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline const Vec3 kE1 = Vec3::UnitX();
inline const Vec3 kE2 = Vec3::UnitY();
inline const Vec3 kE3 = Vec3::UnitZ();

namespace geometry {

constexpr double kSkewTolerance = 1e-9;
constexpr double kRotationTolerance = 1e-9;
constexpr double kSmallAngle = 1e-8;
constexpr double kGimbalMargin = 1e-9;
constexpr double kMaxOrthonormalizeDefect = 0.2;

}  // namespace geometry

struct EulerZYX {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

/// A 3x3 matrix known to lie on SO(3).
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  /// Throws NotOnSO3 unless ||R^T R - I||_F <= 1e-9 and |det R - 1| <= 1e-9.
  static Rotation from_matrix(const Mat3& m) {
    if (!m.allFinite()) {
      throw Error(ErrorCode::NotOnSO3, "matrix has non-finite entries");
    }
    const double defect = (m.transpose() * m - Mat3::Identity()).norm();
    const double det = m.determinant();
    if (defect > geometry::kRotationTolerance ||
        std::abs(det - 1.0) > geometry::kRotationTolerance) {
      std::ostringstream os;
      os << "||R^T R - I|| = " << defect << ", det = " << det;
      throw Error(ErrorCode::NotOnSO3, os.str());
    }
    return Rotation(m);
  }

  static Rotation identity() { return Rotation(); }

  const Mat3& matrix() const { return m_; }
  Vec3 col(int i) const { return m_.col(i); }
  Rotation transpose() const { return Rotation(Mat3(m_.transpose())); }

  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Mat3 operator*(const Mat3& other) const { return m_ * other; }
  // Products of rotations are kept as-is; callers re-orthonormalize when
  // they accumulate many of them.
  Rotation operator*(const Rotation& other) const { return Rotation(Mat3(m_ * other.m_)); }

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  friend Rotation exp_so3(const Vec3& v);
  friend Rotation orthonormalize(const Mat3& m);
  friend Rotation euler_to_rotation(const EulerZYX& e);

  Mat3 m_;
};

inline Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

/// Inverse of hat. Throws NotSkewSymmetric if the symmetric part exceeds 1e-9.
inline Vec3 vee(const Mat3& m) {
  const Mat3 sym = 0.5 * (m + m.transpose());
  const double defect = sym.cwiseAbs().maxCoeff();
  if (!(defect <= geometry::kSkewTolerance)) {
    std::ostringstream os;
    os << "symmetric part magnitude " << defect;
    throw Error(ErrorCode::NotSkewSymmetric, os.str());
  }
  const Mat3 skew = 0.5 * (m - m.transpose());
  return Vec3(skew(2, 1), skew(0, 2), skew(1, 0));
}

/// Rodrigues formula; second-order series below 1e-8 rad.
inline Rotation exp_so3(const Vec3& v) {
  const double theta = v.norm();
  const Mat3 k = hat(v);
  if (theta < geometry::kSmallAngle) {
    return Rotation(Mat3(Mat3::Identity() + k + 0.5 * k * k));
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Rotation(Mat3(Mat3::Identity() + a * k + b * k * k));
}

/// Inverse of the right Jacobian of SO(3) evaluated at v. Maps body rates to
/// the rate of change of the exponential coordinates v in R0 * exp(hat(v)).
inline Mat3 right_jacobian_inverse(const Vec3& v) {
  const double theta = v.norm();
  const Mat3 k = hat(v);
  double c = 1.0 / 12.0;
  if (theta > 1e-4) {
    c = 1.0 / (theta * theta) -
        (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  }
  return Mat3::Identity() + 0.5 * k + c * k * k;
}

inline Rotation euler_to_rotation(const EulerZYX& e) {
  const double cy = std::cos(e.yaw), sy = std::sin(e.yaw);
  const double cp = std::cos(e.pitch), sp = std::sin(e.pitch);
  const double cr = std::cos(e.roll), sr = std::sin(e.roll);
  Mat3 m;
  m << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp, cp * sr, cp * cr;
  return Rotation(m);
}

/// Throws GimbalLock when |R(2,0)| >= 1 - 1e-9.
inline EulerZYX rotation_to_euler(const Rotation& r) {
  const Mat3& m = r.matrix();
  if (std::abs(m(2, 0)) >= 1.0 - geometry::kGimbalMargin) {
    throw Error(ErrorCode::GimbalLock, "pitch too close to +-pi/2");
  }
  EulerZYX e;
  e.pitch = -std::asin(m(2, 0));
  e.roll = std::atan2(m(2, 1), m(2, 2));
  e.yaw = std::atan2(m(1, 0), m(0, 0));
  return e;
}

/// Nearest rotation in the polar-decomposition sense, by Newton iteration
/// X <- (X + X^-T) / 2. Throws TooFarFromSO3 when ||M^T M - I||_F > 0.2.
inline Rotation orthonormalize(const Mat3& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::TooFarFromSO3, "matrix has non-finite entries");
  }
  const double defect = (m.transpose() * m - Mat3::Identity()).norm();
  if (defect > geometry::kMaxOrthonormalizeDefect || m.determinant() <= 0.0) {
    std::ostringstream os;
    os << "||M^T M - I|| = " << defect;
    throw Error(ErrorCode::TooFarFromSO3, os.str());
  }
  Mat3 x = m;
  for (int i = 0; i < 8; ++i) {
    const Mat3 next = 0.5 * (x + x.inverse().transpose());
    const double change = (next - x).norm();
    x = next;
    if (change < 1e-15) break;
  }
  return Rotation(x);
}

/// ||R^T R - I||_F, used for drift monitoring.
inline double orthogonality_defect(const Mat3& m) {
  return (m.transpose() * m - Mat3::Identity()).norm();
}

}  // namespace l1quad
