#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace hestoncal {

// Closed-form 2x2 algebra; nothing in the calibration needs more.

using Vec2 = std::array<double, 2>;

struct Mat2 {
  double a00 = 0.0, a01 = 0.0, a10 = 0.0, a11 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diagonal(double d0, double d1) { return {d0, 0.0, 0.0, d1}; }

  double det() const { return a00 * a11 - a01 * a10; }
  Mat2 transpose() const { return {a00, a10, a01, a11}; }

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline Mat2 operator+(const Mat2& x, const Mat2& y) {
  return {x.a00 + y.a00, x.a01 + y.a01, x.a10 + y.a10, x.a11 + y.a11};
}

inline Mat2 operator*(double s, const Mat2& m) {
  return {s * m.a00, s * m.a01, s * m.a10, s * m.a11};
}

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.a00 * v[0] + m.a01 * v[1], m.a10 * v[0] + m.a11 * v[1]};
}

inline Vec2 operator+(const Vec2& x, const Vec2& y) { return {x[0] + y[0], x[1] + y[1]}; }

inline double dot(const Vec2& x, const Vec2& y) { return x[0] * y[0] + x[1] * y[1]; }

/// Empty when singular (|det| <= tol * scale^2, scale = max |entry|).
inline std::optional<Mat2> inverse(const Mat2& m, double tol = 1e-14) {
  const double scale = std::max({std::abs(m.a00), std::abs(m.a01), std::abs(m.a10),
                                 std::abs(m.a11)});
  const double d = m.det();
  if (scale == 0.0 || !(std::abs(d) > tol * scale * scale)) return std::nullopt;
  return Mat2{m.a11 / d, -m.a01 / d, -m.a10 / d, m.a00 / d};
}

inline bool is_symmetric(const Mat2& m, double tol = 1e-12) {
  return std::abs(m.a01 - m.a10) <= tol * std::max(1.0, std::abs(m.a01));
}

inline bool is_positive_semidefinite(const Mat2& m) {
  return is_symmetric(m) && m.a00 >= 0.0 && m.a11 >= 0.0 && m.det() >= -1e-12 * (m.a00 * m.a11);
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
inline std::optional<Mat2> cholesky(const Mat2& m) {
  if (!(m.a00 > 0.0)) return std::nullopt;
  const double l00 = std::sqrt(m.a00);
  const double l10 = m.a10 / l00;
  const double rem = m.a11 - l10 * l10;
  if (!(rem > 0.0)) return std::nullopt;
  return Mat2{l00, 0.0, l10, std::sqrt(rem)};
}

}  // namespace hestoncal
