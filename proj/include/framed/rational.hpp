#pragma once

// Rational skeleton of an expression: numerator and denominator polynomials
// (not reduced), used to locate candidate zeros and poles. Non-integral powers
// and logarithms are opaque; their bases contribute candidate points only.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "framed/expr.hpp"

namespace framed {

using Poly = std::vector<Complex>;  // ascending coefficients

namespace poly {

inline Poly trim(Poly p) {
  double scale = 0.0;
  for (const auto& c : p) scale = std::max(scale, std::abs(c));
  while (p.size() > 1 && std::abs(p.back()) <= 1e-14 * scale) p.pop_back();
  if (p.empty()) p.push_back(0.0);
  return p;
}
inline Poly add(const Poly& a, const Poly& b, double sign = 1.0) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
  return trim(r);
}
inline Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return trim(r);
}
inline Poly power(const Poly& a, long k) {
  Poly r{1.0};
  for (long i = 0; i < k; ++i) r = mul(r, a);
  return r;
}
inline bool is_zero(const Poly& p) { return p.size() == 1 && p[0] == Complex{}; }
inline std::size_t degree(const Poly& p) { return p.size() - 1; }

/// Roots via companion-matrix eigenvalues (multiple roots appear as clusters).
inline std::vector<Complex> roots(Poly p) {
  p = trim(p);
  std::vector<Complex> out;
  std::size_t zeros = 0;
  while (zeros + 1 < p.size() && p[zeros] == Complex{}) ++zeros;
  out.assign(zeros, Complex{});
  p.erase(p.begin(), p.begin() + static_cast<long>(zeros));
  const std::size_t n = p.size() - 1;
  if (n == 0) return out;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i) {
    c(0, static_cast<long>(i)) = -p[n - 1 - i] / p[n];
    if (i + 1 < n) c(static_cast<long>(i + 1), static_cast<long>(i)) = 1.0;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
  for (long i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

}  // namespace poly

struct RationalSkeleton {
  Poly num{0.0};
  Poly den{1.0};
  std::vector<Poly> opaque;  // bases of non-integral powers and logarithms
};

namespace detail {
struct SkeletonVisitor {
  std::size_t max_degree;

  RationalSkeleton check(RationalSkeleton r) const {
    if (poly::degree(r.num) > max_degree || poly::degree(r.den) > max_degree)
      throw Unsupported("rational skeleton exceeds degree " + std::to_string(max_degree));
    return r;
  }
  static std::vector<Poly> merge(const RationalSkeleton& a, const RationalSkeleton& b) {
    std::vector<Poly> o = a.opaque;
    o.insert(o.end(), b.opaque.begin(), b.opaque.end());
    return o;
  }
  RationalSkeleton constant(Complex c) const { return {{c}, {1.0}, {}}; }
  RationalSkeleton var() const { return {{0.0, 1.0}, {1.0}, {}}; }
  RationalSkeleton neg(const RationalSkeleton& a) const { return {poly::add({0.0}, a.num, -1.0), a.den, a.opaque}; }
  RationalSkeleton add_sub(const RationalSkeleton& a, const RationalSkeleton& b, double sign) const {
    if (a.den == b.den) return check({poly::add(a.num, b.num, sign), a.den, merge(a, b)});
    return check({poly::add(poly::mul(a.num, b.den), poly::mul(b.num, a.den), sign), poly::mul(a.den, b.den), merge(a, b)});
  }
  RationalSkeleton add(const RationalSkeleton& a, const RationalSkeleton& b) const { return add_sub(a, b, 1.0); }
  RationalSkeleton sub(const RationalSkeleton& a, const RationalSkeleton& b) const { return add_sub(a, b, -1.0); }
  RationalSkeleton mul(const RationalSkeleton& a, const RationalSkeleton& b) const {
    return check({poly::mul(a.num, b.num), poly::mul(a.den, b.den), merge(a, b)});
  }
  RationalSkeleton div(const RationalSkeleton& a, const RationalSkeleton& b) const {
    return check({poly::mul(a.num, b.den), poly::mul(a.den, b.num), merge(a, b)});
  }
  RationalSkeleton ipow(const RationalSkeleton& a, long k) const {
    if (k >= 0) return check({poly::power(a.num, k), poly::power(a.den, k), a.opaque});
    return check({poly::power(a.den, -k), poly::power(a.num, -k), a.opaque});
  }
  RationalSkeleton rpow(const RationalSkeleton& a, double mu, std::optional<int>) const {
    if (is_integral(mu)) return ipow(a, static_cast<long>(mu));
    RationalSkeleton r{{1.0}, {1.0}, a.opaque};
    r.opaque.push_back(a.num);
    r.opaque.push_back(a.den);
    return r;
  }
  RationalSkeleton log(const RationalSkeleton& a, std::optional<int>) const { return rpow(a, 0.5, 0); }
};

inline Complex snap(Complex z) {
  auto s = [](double x) {
    const double q = std::nearbyint(x * 24.0) / 24.0;
    return std::abs(q - x) < 1e-8 ? q : x;
  };
  return {s(z.real()), s(z.imag())};
}
}  // namespace detail

inline RationalSkeleton rational_skeleton(const Expr& e, std::size_t max_degree = 400) {
  detail::SkeletonVisitor v{max_degree};
  return fold<RationalSkeleton>(e, v);
}

/// Merge numerically clustered roots and snap them to a coarse rational grid.
inline std::vector<Complex> cluster_points(const std::vector<Complex>& pts, double radius = 1e-4) {
  std::vector<std::vector<Complex>> groups;
  for (const auto& p : pts) {
    bool placed = false;
    for (auto& g : groups) {
      if (std::abs(g.front() - p) < radius * (1.0 + std::abs(p))) {
        g.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({p});
  }
  std::vector<Complex> out;
  for (const auto& g : groups) {
    Complex m{};
    for (const auto& p : g) m += p;
    out.push_back(detail::snap(m / static_cast<double>(g.size())));
  }
  return out;
}

/// Finite points where e may vanish, have a pole, or branch.
inline std::vector<Complex> candidate_points(const Expr& e) {
  const RationalSkeleton r = rational_skeleton(e);
  std::vector<Complex> pts;
  auto take = [&](const Poly& p) {
    if (poly::is_zero(p)) return;
    for (const auto& z : poly::roots(p)) pts.push_back(z);
  };
  take(r.num);
  take(r.den);
  for (const auto& p : r.opaque) take(p);
  return cluster_points(pts);
}

/// Finite points where e may have a pole or branch (zeros of the numerator excluded).
inline std::vector<Complex> pole_candidates(const Expr& e) {
  const RationalSkeleton r = rational_skeleton(e);
  std::vector<Complex> pts;
  auto take = [&](const Poly& p) {
    if (poly::is_zero(p) || poly::degree(p) < 1) return;
    for (const auto& z : poly::roots(p)) pts.push_back(z);
  };
  take(r.den);
  for (const auto& p : r.opaque) take(p);
  return cluster_points(pts);
}

}  // namespace framed
