#pragma once

#include <array>

// Rotation utilities shared by pose extraction, constraint compilation, and
// BVH export.
//
// Conventions (documented once, used everywhere):
//   * world frame is right-handed, +X forward at heading 0, +Z up;
//   * headings/yaw are counterclockwise-positive about +Z;
//   * head orientation decomposes yaw-then-pitch, R = Rz(yaw) * Ry(pitch),
//     so positive pitch tilts the view axis downward; roll is discarded.
namespace duet::rot {

using Mat3 = std::array<double, 9>;  // row-major
using Vec3 = std::array<double, 3>;

/// Wrap an angle to (-pi, pi].
double wrap_pi(double a);

Mat3 identity3();
Mat3 rot_x(double a);
Mat3 rot_y(double a);
Mat3 rot_z(double a);
Mat3 mul(const Mat3& a, const Mat3& b);
Vec3 apply(const Mat3& m, const Vec3& v);

/// Rodrigues formula: axis-angle 3-vector (exponential map) to matrix.
Mat3 expmap_to_matrix(const Vec3& r);

/// Matrix logarithm back to the exponential map (angle in [0, pi]).
Vec3 matrix_to_expmap(const Mat3& m);

struct YawPitch {
  double yaw = 0.0;
  double pitch = 0.0;
};

/// Yaw-then-pitch decomposition of the rotated forward axis (+X).
YawPitch yaw_pitch_from_matrix(const Mat3& m);

Mat3 yaw_pitch_to_matrix(double yaw, double pitch);

/// Exponential map of Rz(yaw)*Ry(pitch); inverse of head orientation math.
Vec3 yaw_pitch_to_expmap(double yaw, double pitch);

/// Euler angles (z, y, x) such that m = Rz(z)*Ry(y)*Rx(x). BVH channel order
/// Zrotation Yrotation Xrotation.
Vec3 euler_zyx_from_matrix(const Mat3& m);

}  // namespace duet::rot
