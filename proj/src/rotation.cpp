#include "duet/rotation.hpp"

#include <algorithm>
#include <cmath>

namespace duet::rot {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double wrap_pi(double a) {
  double w = std::remainder(a, 2.0 * kPi);  // in [-pi, pi]
  if (w <= -kPi) w = kPi;
  return w;
}

Mat3 identity3() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {1, 0, 0, 0, c, -s, 0, s, c};
}

Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c, 0, s, 0, 1, 0, -s, 0, c};
}

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c, -s, 0, s, c, 0, 0, 0, 1};
}

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += a[i * 3 + k] * b[k * 3 + j];
      out[i * 3 + j] = acc;
    }
  return out;
}

Vec3 apply(const Mat3& m, const Vec3& v) {
  return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
          m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
          m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

Mat3 expmap_to_matrix(const Vec3& r) {
  const double angle = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (angle < 1e-12) {
    // First-order expansion keeps the map smooth through zero.
    Mat3 m = identity3();
    m[1] = -r[2];
    m[2] = r[1];
    m[3] = r[2];
    m[5] = -r[0];
    m[6] = -r[1];
    m[7] = r[0];
    return m;
  }
  const double x = r[0] / angle, y = r[1] / angle, z = r[2] / angle;
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  return {t * x * x + c,     t * x * y - s * z, t * x * z + s * y,
          t * x * y + s * z, t * y * y + c,     t * y * z - s * x,
          t * x * z - s * y, t * y * z + s * x, t * z * z + c};
}

Vec3 matrix_to_expmap(const Mat3& m) {
  const double tr = m[0] + m[4] + m[8];
  const double c = std::clamp((tr - 1.0) * 0.5, -1.0, 1.0);
  const double angle = std::acos(c);
  if (angle < 1e-12) {
    return {0.5 * (m[7] - m[5]), 0.5 * (m[2] - m[6]), 0.5 * (m[3] - m[1])};
  }
  if (angle > kPi - 1e-6) {
    // Near-pi: extract the axis from the symmetric part.
    const double xx = std::sqrt(std::max(0.0, (m[0] + 1.0) * 0.5));
    const double yy = std::sqrt(std::max(0.0, (m[4] + 1.0) * 0.5));
    const double zz = std::sqrt(std::max(0.0, (m[8] + 1.0) * 0.5));
    double x = xx, y = yy, z = zz;
    // Fix signs against the off-diagonal products.
    if (xx >= yy && xx >= zz) {
      y = (m[1] + m[3]) / (4.0 * (xx > 1e-12 ? xx : 1.0)) * 2.0;
      z = (m[2] + m[6]) / (4.0 * (xx > 1e-12 ? xx : 1.0)) * 2.0;
    } else if (yy >= xx && yy >= zz) {
      x = (m[1] + m[3]) / (4.0 * (yy > 1e-12 ? yy : 1.0)) * 2.0;
      z = (m[5] + m[7]) / (4.0 * (yy > 1e-12 ? yy : 1.0)) * 2.0;
    } else {
      x = (m[2] + m[6]) / (4.0 * (zz > 1e-12 ? zz : 1.0)) * 2.0;
      y = (m[5] + m[7]) / (4.0 * (zz > 1e-12 ? zz : 1.0)) * 2.0;
    }
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n < 1e-12) return {angle, 0.0, 0.0};
    return {angle * x / n, angle * y / n, angle * z / n};
  }
  const double s = 2.0 * std::sin(angle);
  return {angle * (m[7] - m[5]) / s, angle * (m[2] - m[6]) / s,
          angle * (m[3] - m[1]) / s};
}

YawPitch yaw_pitch_from_matrix(const Mat3& m) {
  const Vec3 f = apply(m, {1.0, 0.0, 0.0});
  YawPitch yp;
  yp.yaw = std::atan2(f[1], f[0]);
  // R = Rz(yaw)*Ry(pitch) maps +X to (cos y cos p, sin y cos p, -sin p).
  yp.pitch = std::asin(std::clamp(-f[2], -1.0, 1.0));
  return yp;
}

Mat3 yaw_pitch_to_matrix(double yaw, double pitch) {
  return mul(rot_z(yaw), rot_y(pitch));
}

Vec3 yaw_pitch_to_expmap(double yaw, double pitch) {
  return matrix_to_expmap(yaw_pitch_to_matrix(yaw, pitch));
}

Vec3 euler_zyx_from_matrix(const Mat3& m) {
  // m = Rz(z)*Ry(y)*Rx(x): m[6] = -sin(y).
  const double sy = std::clamp(-m[6], -1.0, 1.0);
  const double y = std::asin(sy);
  double z, x;
  if (std::abs(std::cos(y)) > 1e-9) {
    z = std::atan2(m[3], m[0]);
    x = std::atan2(m[7], m[8]);
  } else {
    // Gimbal lock: fold everything into z.
    z = std::atan2(-m[1], m[4]);
    x = 0.0;
  }
  return {z, y, x};
}

}  // namespace duet::rot
