#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cstddef>
#include <functional>
#include <vector>

#include "framed/point.hpp"

namespace framed {

/// Contour integral of f(z) dz along the segment [a, b] by adaptive Gauss-Kronrod (15 points).
inline Complex integrate_segment(const std::function<Complex(Complex)>& f, Complex a, Complex b,
                                 double abs_tol = 1e-10, unsigned max_depth = 18) {
  const Complex dz = b - a;
  auto g = [&](double t) -> Complex { return f(a + t * dz) * dz; };
  double err = 0.0;
  // Boost's tolerance is relative; scale it from the absolute target.
  const Complex coarse = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, 0, 0.0, &err);
  const double rel = abs_tol / std::max(std::abs(coarse), 1e-300);
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, max_depth, std::max(rel, 1e-15),
                                                                       &err);
}

/// Integral along a polyline z0 -> z1 -> ... .
inline Complex integrate_path(const std::function<Complex(Complex)>& f, const std::vector<Complex>& path,
                              double abs_tol = 1e-10) {
  Complex s{};
  for (std::size_t i = 1; i < path.size(); ++i) s += integrate_segment(f, path[i - 1], path[i], abs_tol);
  return s;
}

/// Counterclockwise circle integral of f(z) dz by the periodic trapezoid rule.
inline Complex integrate_circle(const std::function<Complex(Complex)>& f, Complex center, double radius,
                                std::size_t nodes = 512) {
  Complex s{};
  for (std::size_t k = 0; k < nodes; ++k) {
    const Complex e = std::exp(Complex(0.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(nodes)));
    s += f(center + radius * e) * (kI * radius * e);
  }
  return s * (2.0 * kPi / static_cast<double>(nodes));
}

}  // namespace framed
