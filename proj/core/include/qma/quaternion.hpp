#pragma once

#include <cmath>

namespace qma {

// Quaternion w*e0 + x*e1 + y*e2 + z*e3 with e1*e2 = e3 and ei^2 = -e0.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}
  static constexpr Quaternion real(double a) { return {a, 0.0, 0.0, 0.0}; }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }

  constexpr Quaternion operator+(const Quaternion& o) const {
    return {w + o.w, x + o.x, y + o.y, z + o.z};
  }
  constexpr Quaternion operator-(const Quaternion& o) const {
    return {w - o.w, x - o.x, y - o.y, z - o.z};
  }
  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
  constexpr Quaternion operator*(double s) const {
    return {w * s, x * s, y * s, z * s};
  }
  Quaternion& operator+=(const Quaternion& o) {
    w += o.w;
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

// Hamilton product.
constexpr Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return quat_mul(a, b);
}

constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }

}  // namespace qma
