#pragma once

// Truncated power-series primitives on coefficient vectors a[0] + a[1] t + ...
// Every routine returns exactly `n` coefficients.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "framed/errors.hpp"
#include "framed/point.hpp"

namespace framed::series {

using Coeffs = std::vector<Complex>;

inline Coeffs resized(Coeffs a, std::size_t n) {
  a.resize(n, Complex{});
  return a;
}

inline Coeffs add(const Coeffs& a, const Coeffs& b, std::size_t n) {
  Coeffs r(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k < a.size()) r[k] += a[k];
    if (k < b.size()) r[k] += b[k];
  }
  return r;
}

inline Coeffs sub(const Coeffs& a, const Coeffs& b, std::size_t n) {
  Coeffs r(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k < a.size()) r[k] += a[k];
    if (k < b.size()) r[k] -= b[k];
  }
  return r;
}

inline Coeffs scale(const Coeffs& a, Complex s, std::size_t n) {
  Coeffs r(n);
  for (std::size_t k = 0; k < n && k < a.size(); ++k) r[k] = s * a[k];
  return r;
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b, std::size_t n) {
  Coeffs r(n);
  for (std::size_t i = 0; i < n && i < a.size(); ++i) {
    if (a[i] == Complex{}) continue;
    for (std::size_t j = 0; i + j < n && j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// 1/a; requires a[0] != 0.
inline Coeffs inv(const Coeffs& a, std::size_t n) {
  if (a.empty() || a[0] == Complex{}) throw SingularPoint("series reciprocal of a vanishing series");
  Coeffs r(n);
  if (n == 0) return r;
  r[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < n; ++k) {
    Complex s{};
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * r[k - j];
    r[k] = -s * r[0];
  }
  return r;
}

inline Coeffs div(const Coeffs& a, const Coeffs& b, std::size_t n) {
  if (b.empty() || b[0] == Complex{}) throw SingularPoint("series division by a vanishing series");
  Coeffs r(n);
  const Complex b0inv = 1.0 / b[0];
  for (std::size_t k = 0; k < n; ++k) {
    Complex s = k < a.size() ? a[k] : Complex{};
    for (std::size_t j = 1; j <= k && j < b.size(); ++j) s -= b[j] * r[k - j];
    r[k] = s * b0inv;
  }
  return r;
}

inline Coeffs pow_int(const Coeffs& a, long p, std::size_t n) {
  if (p < 0) return inv(pow_int(a, -p, n), n);
  Coeffs result(n);
  if (n > 0) result[0] = 1.0;
  Coeffs base = resized(a, n);
  while (p > 0) {
    if (p & 1) result = mul(result, base, n);
    p >>= 1;
    if (p > 0) base = mul(base, base, n);
  }
  return result;
}

/// a^mu with the value of a[0]^mu supplied by the caller (it fixes the branch).
inline Coeffs pow_real(const Coeffs& a, double mu, Complex head, std::size_t n) {
  if (a.empty() || a[0] == Complex{}) throw SingularPoint("real power of a vanishing series");
  Coeffs h(n);
  if (n == 0) return h;
  h[0] = head;
  for (std::size_t k = 1; k < n; ++k) {
    Complex s{};
    for (std::size_t j = 1; j <= k && j < a.size(); ++j)
      s += ((mu + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * a[j] * h[k - j];
    h[k] = s / (static_cast<double>(k) * a[0]);
  }
  return h;
}

/// log a with log(a[0]) supplied by the caller.
inline Coeffs log(const Coeffs& a, Complex head, std::size_t n) {
  if (a.empty() || a[0] == Complex{}) throw SingularPoint("logarithm of a vanishing series");
  Coeffs l(n);
  if (n == 0) return l;
  l[0] = head;
  for (std::size_t k = 1; k < n; ++k) {
    Complex s = k < a.size() ? a[k] : Complex{};
    for (std::size_t j = 1; j < k; ++j)
      if (k - j < a.size()) s -= static_cast<double>(j) / static_cast<double>(k) * l[j] * a[k - j];
    l[k] = s / a[0];
  }
  return l;
}

/// Coefficients of d/dt; the result has n coefficients, the last ones padded with zero
/// only if a is too short.
inline Coeffs derivative(const Coeffs& a, std::size_t n) {
  Coeffs r(n);
  for (std::size_t k = 0; k < n && k + 1 < a.size(); ++k)
    r[k] = static_cast<double>(k + 1) * a[k + 1];
  return r;
}

inline Complex eval(const Coeffs& a, Complex t) {
  Complex s{};
  for (std::size_t k = a.size(); k-- > 0;) s = s * t + a[k];
  return s;
}

inline double max_abs(const Coeffs& a) {
  double m = 0.0;
  for (const auto& c : a) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace framed::series
