#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace cmvwalk {

using cplx = std::complex<double>;
using Vec2 = std::array<cplx, 2>;

/// 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
  cplx a{}, b{}, c{}, d{};

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diag(cplx x, cplx y) { return {x, 0.0, 0.0, y}; }

  cplx det() const { return a * d - b * c; }
  Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
  Mat2 inverse() const {
    const cplx D = det();
    return {d / D, -b / D, -c / D, a / D};
  }

  Mat2& operator*=(double s) {
    a *= s; b *= s; c *= s; d *= s;
    return *this;
  }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1]};
}

inline Mat2 operator-(const Mat2& x, const Mat2& y) {
  return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

inline double frobenius_norm_sq(const Mat2& m) {
  return std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d);
}

inline double frobenius_norm(const Mat2& m) { return std::sqrt(frobenius_norm_sq(m)); }

/// Largest singular value, closed form: s^2 = (F + sqrt(F^2 - 4|det|^2)) / 2.
inline double operator_norm(const Mat2& m) {
  const double f = frobenius_norm_sq(m);
  const double dd = std::abs(m.det());
  const double disc = std::max(0.0, (f - 2.0 * dd) * (f + 2.0 * dd));
  return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

/// Largest entrywise modulus of x - y.
inline double max_abs_diff(const Mat2& x, const Mat2& y) {
  const Mat2 e = x - y;
  return std::max({std::abs(e.a), std::abs(e.b), std::abs(e.c), std::abs(e.d)});
}

}  // namespace cmvwalk
