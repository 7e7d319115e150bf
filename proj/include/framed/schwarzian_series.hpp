#pragma once

// Regular-singular series solution of S{f, z^n} = -sigma about z = 0:
// f = p1/p2 with p'' + (-sigma/2 - (n^2-1)/(4 z^2)) p = 0,
// p1 = z^{(n+1)/2} sum a_j z^j, p2 = z^{(1-n)/2} sum b_j z^j.

#include <cmath>
#include <cstddef>

#include "framed/laurent.hpp"
#include "framed/schwarzian.hpp"

namespace framed {

struct SchwarzianSolution {
  long n = 1;  // multiplicity of g at the center
  long k = 1;  // exponent gap actually used (k = n unless sigma has a double pole)
  // Exponent offsets of p1 and p2, stored doubled to stay integral: (k+1) and (1-k).
  long p1_twice_offset = 2;
  long p2_twice_offset = 0;
  series::Coeffs a;  // p1 coefficients, a[0] = 1
  series::Coeffs b;  // p2 coefficients after the gauge fix, b[0] = 1
  Complex gauge{};   // p2 <- p2 + gauge * p1 applied to kill the z^{2k} term of f
  LaurentSeries f_series;
  long truncation = 0;
  double backsub_error = 0.0;  // max coefficient error of S{f, z^n} + sigma through order N-3
};

namespace detail {

inline LaurentSeries constant_series(Complex c, std::size_t len) {
  series::Coeffs v(len);
  v[0] = c;
  series::Coeffs m(len);
  m[0] = std::abs(c);
  return {SpherePoint::finite(0.0), 0, v, m};
}

inline LaurentSeries monomial_series(Complex c, long e, std::size_t len) {
  series::Coeffs v(len), m(len);
  v[0] = c;
  m[0] = std::abs(c);
  return {SpherePoint::finite(0.0), e, v, m};
}

}  // namespace detail

/// S{f, z} as a Laurent series, from the Laurent series of f.
inline LaurentSeries schwarzian_of_series(const LaurentSeries& f) {
  const LaurentSeries f1 = derivative(f);
  const LaurentSeries f2 = derivative(f1);
  const LaurentSeries f3 = derivative(f2);
  const LaurentSeries r = f2 / f1;
  const LaurentSeries three_halves = detail::constant_series(1.5, f1.length() + 4);
  return f3 / f1 - three_halves * r * r;
}


/// Solve with sigma given by its Laurent series at 0 (enough terms through exponent N).
inline SchwarzianSolution solve_schwarzian_series(const LaurentSeries& sigma, long n, long N = 24,
                                                  double resonance_tol = 1e-9) {
  if (n < 1) throw BadPole("multiplicity must be at least 1");
  if (N < 4) throw BadPole("truncation must be at least 4");
  long k = n;
  Complex c2{};
  if (!sigma.is_zero() && sigma.leading_order() < -2)
    throw BadPole("sigma has a pole of order " + std::to_string(-sigma.leading_order()));
  if (!sigma.is_zero() && sigma.leading_order() < 0) {
    c2 = sigma.coefficient(-2);
    const Complex k2 = 2.0 * c2 + static_cast<double>(n * n);
    const double kr = std::nearbyint(std::sqrt(std::max(k2.real(), 0.0)));
    if (std::abs(k2 - kr * kr) > 1e-8 * std::max(1.0, std::abs(k2)) || kr < 1)
      throw BadPole("z^-2 coefficient of sigma is not (k^2-n^2)/2 for an integer k");
    if (c2 != Complex{} && kr < 2) throw BadPole("type-2 ends need k >= 2");
    k = static_cast<long>(kr);
  }
  if (sigma.truncation() < N - 2)
    throw BadPole("sigma known only through exponent " + std::to_string(sigma.truncation()));

  // w(z) = z^2 (sigma - c2/z^2) = sum_i w_i z^i, w_0 = 0.
  const auto len = static_cast<std::size_t>(N + 1);
  series::Coeffs w(len);
  for (std::size_t i = 1; i < len; ++i) w[i] = sigma.coefficient(static_cast<long>(i) - 2);

  SchwarzianSolution sol;
  sol.n = n;
  sol.k = k;
  sol.p1_twice_offset = k + 1;
  sol.p2_twice_offset = 1 - k;
  sol.truncation = N;
  sol.a.assign(len, 0.0);
  sol.b.assign(len, 0.0);
  sol.a[0] = sol.b[0] = 1.0;
  for (std::size_t j = 1; j < len; ++j) {
    Complex ra{}, rb{};
    double mb = 0.0;
    for (std::size_t i = 1; i <= j; ++i) {
      ra += w[i] * sol.a[j - i];
      rb += w[i] * sol.b[j - i];
      mb += std::abs(w[i]) * std::abs(sol.b[j - i]);
    }
    ra *= 0.5;
    rb *= 0.5;
    mb *= 0.5;
    const auto jj = static_cast<double>(j);
    sol.a[j] = ra / (jj * (jj + static_cast<double>(k)));
    if (static_cast<long>(j) == k) {
      // Resonance: p2 stays a pure power series only if the right side vanishes.
      if (std::abs(rb) > resonance_tol * std::max(1.0, mb))
        throw ResonanceError("logarithmic term at j = " + std::to_string(j) + ", residual " +
                             std::to_string(std::abs(rb)));
      sol.b[j] = 0.0;
    } else {
      sol.b[j] = rb / (jj * (jj - static_cast<double>(k)));
    }
  }

  // Gauge: f -> f / (1 + t f) removes the z^{2k} coefficient; equivalently p2 += t p1.
  auto quotient = series::div(sol.a, sol.b, len);
  if (static_cast<std::size_t>(k) < len) {
    sol.gauge = quotient[static_cast<std::size_t>(k)];
    for (std::size_t j = static_cast<std::size_t>(k); j < len; ++j) sol.b[j] += sol.gauge * sol.a[j - static_cast<std::size_t>(k)];
    quotient = series::div(sol.a, sol.b, len);
  }
  sol.f_series = make_laurent(k, quotient);

  // Back-substitution: S{f, z^n} = S{f, z} + (n^2-1)/(2 z^2) should equal -sigma.
  const LaurentSeries s = schwarzian_of_series(sol.f_series) +
                          detail::monomial_series(static_cast<double>(n * n - 1) / 2.0, -2, len + 4);
  double err = 0.0, scale = 1.0;
  for (long e = -2; e <= N - 3; ++e) {
    err = std::max(err, std::abs(s.coefficient(e) + sigma.coefficient(e)));
    scale = std::max(scale, std::abs(sigma.coefficient(e)));
  }
  sol.backsub_error = err / scale;
  return sol;
}

inline SchwarzianSolution solve_schwarzian_series(const Expr& sigma, long n, long N = 24) {
  return solve_schwarzian_series(laurent(sigma, 0.0, N + 2), n, N);
}

}  // namespace framed
