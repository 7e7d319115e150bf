#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <complex>
#include <numbers>
#include <string>

namespace framed {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// A point of the Riemann sphere: a finite complex number or infinity.
struct SpherePoint {
  Complex z{0.0, 0.0};
  bool infinite = false;

  static SpherePoint infinity() { return {Complex{}, true}; }
  static SpherePoint finite(Complex w) { return {w, false}; }

  bool is_infinite() const { return infinite; }

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.z == b.z;
  }
};

/// Chordal distance on the unit Riemann sphere, in [0, 2].
inline double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
  if (a.infinite && b.infinite) return 0.0;
  if (a.infinite) return 2.0 / std::sqrt(1.0 + std::norm(b.z));
  if (b.infinite) return 2.0 / std::sqrt(1.0 + std::norm(a.z));
  return 2.0 * std::abs(a.z - b.z) /
         std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

inline bool near(const SpherePoint& a, const SpherePoint& b, double tol) {
  return chordal_distance(a, b) < tol;
}

inline std::string format_complex(Complex z);

inline std::string format_point(const SpherePoint& p) {
  return p.infinite ? std::string("inf") : format_complex(p.z);
}

/// Shortest decimal that reads back to the same double.
inline std::string format_real(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string format_complex(Complex z) {
  const double re = z.real(), im = z.imag();
  if (im == 0.0) return format_real(re);
  const std::string mag = std::abs(im) == 1.0 ? "i" : format_real(std::abs(im)) + "*i";
  if (re == 0.0) return (im < 0 ? "-" : "") + mag;
  return format_real(re) + (im < 0 ? "-" : "+") + mag;
}

}  // namespace framed
