#pragma once

#include <cmath>

namespace nefem {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double a) const { return {x * a, y * a}; }
  Vec2 operator/(double a) const { return {x / a, y / a}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::sqrt(x * x + y * y); }
  double norm2() const { return x * x + y * y; }
  Vec2 normalized() const {
    const double n = norm();
    return {x / n, y / n};
  }
  /// Rotation by -90 degrees; maps a unit tangent to the outward normal
  /// under the fluid-on-the-left orientation convention.
  Vec2 rotated_cw() const { return {y, -x}; }
};

inline Vec2 operator*(double a, Vec2 v) { return v * a; }

/// Column-major-free tiny 2x2 matrix: m[row][col].
struct Mat2 {
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  Mat2 inverse() const {
    const double d = det();
    return Mat2{{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
  }
  /// inverse-transpose applied to a vector (reference-to-physical gradients).
  Vec2 inv_transpose_apply(Vec2 g) const {
    const double d = det();
    return {(m[1][1] * g.x - m[1][0] * g.y) / d,
            (-m[0][1] * g.x + m[0][0] * g.y) / d};
  }
};

}  // namespace nefem
