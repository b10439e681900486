#pragma once

#include <cmath>

namespace fluxmaj {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  constexpr Vec2& operator+=(Vec2 b) {
    x += b.x;
    y += b.y;
    return *this;
  }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Row-major 2x2 matrix [[xx, xy], [yx, yy]].
struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yx = 0.0;
  double yy = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 from_columns(Vec2 c0, Vec2 c1) { return {c0.x, c1.x, c0.y, c1.y}; }

  [[nodiscard]] constexpr double det() const { return xx * yy - xy * yx; }
  [[nodiscard]] constexpr double trace() const { return xx + yy; }
  [[nodiscard]] constexpr Mat2 transpose() const { return {xx, yx, xy, yy}; }
  [[nodiscard]] constexpr Mat2 symmetric_part() const {
    const double off = 0.5 * (xy + yx);
    return {xx, off, off, yy};
  }
  /// Caller checks det() != 0.
  [[nodiscard]] constexpr Mat2 inverse() const {
    const double d = det();
    return {yy / d, -xy / d, -yx / d, xx / d};
  }
  [[nodiscard]] constexpr bool is_symmetric() const { return xy == yx; }

  friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy};
  }
  friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.xx - b.xx, a.xy - b.xy, a.yx - b.yx, a.yy - b.yy};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& a) {
    return {s * a.xx, s * a.xy, s * a.yx, s * a.yy};
  }
  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
            a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy};
  }
  friend constexpr Vec2 operator*(const Mat2& a, Vec2 v) {
    return {a.xx * v.x + a.xy * v.y, a.yx * v.x + a.yy * v.y};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// Largest absolute entry of a - b.
inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  const Mat2 d = a - b;
  return std::fmax(std::fmax(std::fabs(d.xx), std::fabs(d.xy)),
                   std::fmax(std::fabs(d.yx), std::fabs(d.yy)));
}

}  // namespace fluxmaj
