#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "framed/errors.hpp"
#include "framed/point.hpp"

namespace framed {

/// 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
  Complex a{1.0}, b{}, c{}, d{1.0};

  static Mat2 identity() { return {}; }
  static Mat2 diag(Complex x, Complex y) { return {x, 0.0, 0.0, y}; }

  Complex det() const { return a * d - b * c; }
  Complex trace() const { return a + d; }

  Mat2 conj_transpose() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
  Mat2 transpose() const { return {a, c, b, d}; }
  Mat2 conj() const { return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)}; }

  Mat2 inverse(double tol = 1e-14) const {
    const Complex D = det();
    if (std::abs(D) < tol) throw SingularMatrix("determinant " + format_complex(D));
    return {d / D, -b / D, -c / D, a / D};
  }

  double max_abs() const { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }

  /// Scaled to unit determinant (one of the two square-root choices).
  Mat2 unimodular() const {
    const Complex s = std::sqrt(det());
    if (s == Complex{}) throw SingularMatrix("cannot normalize a singular matrix");
    return {a / s, b / s, c / s, d / s};
  }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
  friend Mat2 operator*(Complex s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
};

inline Mat2 multiply(const Mat2& x, const Mat2& y) { return x * y; }
inline Mat2 invert(const Mat2& m, double tol = 1e-14) { return m.inverse(tol); }
inline Complex determinant(const Mat2& m) { return m.det(); }

/// True iff M, scaled to unit determinant, satisfies conj(M)^T M = I within tol.
inline bool is_su2(const Mat2& m, double tol = 1e-10) {
  Mat2 u;
  try {
    u = m.unimodular();
  } catch (const SingularMatrix&) {
    return false;
  }
  return (u.conj_transpose() * u - Mat2::identity()).max_abs() < tol;
}

/// Projective class of an invertible 2x2 matrix, acting on the Riemann sphere.
class Moebius {
 public:
  Moebius() = default;
  explicit Moebius(const Mat2& m) : m_(m) {
    if (m.det() == Complex{}) throw SingularMatrix("Moebius map needs a nonzero determinant");
  }
  Moebius(Complex a, Complex b, Complex c, Complex d) : Moebius(Mat2{a, b, c, d}) {}

  const Mat2& matrix() const { return m_; }

  SpherePoint apply(const SpherePoint& w) const {
    const auto& [a, b, c, d] = m_;
    if (w.is_infinite()) {
      if (c == Complex{}) return SpherePoint::infinity();
      return SpherePoint::finite(a / c);
    }
    const Complex den = c * w.z + d;
    if (den == Complex{}) return SpherePoint::infinity();
    return SpherePoint::finite((a * w.z + b) / den);
  }
  Complex apply(Complex w) const {
    const SpherePoint r = apply(SpherePoint::finite(w));
    if (r.is_infinite()) throw SingularPoint("Moebius map sends " + format_complex(w) + " to infinity");
    return r.z;
  }

  Moebius inverse() const { return Moebius(m_.inverse(0.0)); }
  friend Moebius operator*(const Moebius& x, const Moebius& y) { return Moebius(x.m_ * y.m_); }

  /// Projective distance to another map: min over the sign of the unimodular lift.
  double distance(const Moebius& other) const {
    const Mat2 x = m_.unimodular(), y = other.m_.unimodular();
    return std::min((x - y).max_abs(), (x + y).max_abs());
  }
  bool is_identity(double tol = 1e-10) const { return distance(Moebius()) < tol; }

 private:
  Mat2 m_{};
};

inline SpherePoint moebius_apply(const Moebius& m, const SpherePoint& w) { return m.apply(w); }

namespace detail {
// Map sending p1, p2, p3 to 0, 1, infinity.
inline Mat2 to_zero_one_inf(const std::array<SpherePoint, 3>& p) {
  const auto& [p1, p2, p3] = p;
  if (p1.is_infinite()) return {0.0, p2.z - p3.z, 1.0, -p3.z};
  if (p2.is_infinite()) return {1.0, -p1.z, 1.0, -p3.z};
  if (p3.is_infinite()) return {1.0, -p1.z, 0.0, p2.z - p1.z};
  return {p2.z - p3.z, -p1.z * (p2.z - p3.z), p2.z - p1.z, -p3.z * (p2.z - p1.z)};
}
}  // namespace detail

/// The unique Moebius map sending from[i] to to[i]; all points distinct.
inline Moebius moebius_from_points(const std::array<SpherePoint, 3>& from, const std::array<SpherePoint, 3>& to) {
  const Mat2 s = detail::to_zero_one_inf(from);
  const Mat2 t = detail::to_zero_one_inf(to);
  return Moebius(t.inverse(0.0) * s);
}

}  // namespace framed
