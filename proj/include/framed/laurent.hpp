#pragma once

// Truncated Laurent series about a finite point or about infinity.
//
// Each series carries, next to its coefficients, a majorant (entrywise bounds on
// the absolute contributions that produced each coefficient). Leading
// coefficients that are below kCancelTol times their majorant are treated as
// exact cancellations, which keeps valuations honest after sums such as 1 - z^4
// expanded at z = 1.

#include <cmath>
#include <cstddef>
#include <vector>

#include "framed/expr.hpp"
#include "framed/series.hpp"

namespace framed {

class LaurentSeries {
 public:
  static constexpr double kCancelTol = 1e-10;

  LaurentSeries() = default;

  /// Coefficients for exponents lead, lead+1, ...; known exactly up to exponent `end` - 1.
  LaurentSeries(SpherePoint center, long lead, series::Coeffs coeffs, series::Coeffs majorant)
      : center_(center), lead_(lead), c_(std::move(coeffs)), m_(std::move(majorant)) {
    m_.resize(c_.size());
    end_ = lead_ + static_cast<long>(c_.size());
    strip();
  }

  static LaurentSeries zero(SpherePoint center, long end) {
    LaurentSeries s;
    s.center_ = center;
    s.lead_ = end;
    s.end_ = end;
    return s;
  }

  SpherePoint center() const { return center_; }
  bool is_zero() const { return c_.empty(); }
  /// Valuation. For a series that vanishes to truncation this is `end()`.
  long leading_order() const { return lead_; }
  /// Highest exponent whose coefficient is known.
  long truncation() const { return end_ - 1; }
  long end() const { return end_; }
  const series::Coeffs& coeffs() const { return c_; }
  const series::Coeffs& majorant() const { return m_; }
  std::size_t length() const { return c_.size(); }

  Complex leading_coefficient() const { return c_.empty() ? Complex{} : c_[0]; }

  /// Coefficient of t^k (t = z - center, or 1/z at infinity).
  Complex coefficient(long k) const {
    if (k < lead_ || k >= end_) return Complex{};
    return c_[static_cast<std::size_t>(k - lead_)];
  }

  /// Local coordinate of the point z.
  Complex local(Complex z) const { return center_.is_infinite() ? 1.0 / z : z - center_.z; }

  /// Sum of the truncated series at chart point z.
  Complex eval(Complex z) const {
    const Complex t = local(z);
    return series::eval(c_, t) * std::pow(t, static_cast<int>(lead_));
  }

  /// Keep exponents below `end`.
  LaurentSeries truncated(long end) const {
    if (end >= end_) return *this;
    if (end <= lead_) return zero(center_, end);
    const auto n = static_cast<std::size_t>(end - lead_);
    return {center_, lead_, series::resized(c_, n), series::resized(m_, n)};
  }

 private:
  void strip() {
    std::size_t k = 0;
    while (k < c_.size() && std::abs(c_[k]) <= kCancelTol * std::abs(m_[k])) ++k;
    if (k == 0) return;
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(k));
    m_.erase(m_.begin(), m_.begin() + static_cast<long>(k));
    lead_ += static_cast<long>(k);
    if (c_.empty()) lead_ = end_;
  }

  SpherePoint center_{};
  long lead_ = 0;
  long end_ = 0;
  series::Coeffs c_;
  series::Coeffs m_;
};

namespace laurent_detail {

inline series::Coeffs abs_coeffs(const series::Coeffs& a) {
  series::Coeffs r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::abs(a[i]);
  return r;
}

/// Majorant of 1/b given b0 and a majorant of b: 1/(|b0| - sum_{j>=1} m_j t^j).
inline series::Coeffs inv_majorant(const series::Coeffs& c, const series::Coeffs& m, std::size_t n) {
  series::Coeffs d(m.size());
  d[0] = std::abs(c[0]);
  for (std::size_t j = 1; j < m.size(); ++j) d[j] = -std::abs(m[j]);
  auto r = series::inv(d, n);
  for (auto& x : r) x = std::abs(x);
  return r;
}

}  // namespace laurent_detail

inline LaurentSeries operator-(const LaurentSeries& a) {
  if (a.is_zero()) return a;
  return {a.center(), a.leading_order(), series::scale(a.coeffs(), -1.0, a.length()), a.majorant()};
}

inline LaurentSeries add_sub(const LaurentSeries& a, const LaurentSeries& b, double sign) {
  const long end = std::min(a.end(), b.end());
  if (a.is_zero()) return sign > 0 ? b.truncated(end) : (-b).truncated(end);
  if (b.is_zero()) return a.truncated(end);
  const long lead = std::min(a.leading_order(), b.leading_order());
  if (lead >= end) return LaurentSeries::zero(a.center(), end);
  const auto n = static_cast<std::size_t>(end - lead);
  series::Coeffs c(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long k = lead + static_cast<long>(i);
    const Complex ca = a.coefficient(k), cb = b.coefficient(k);
    c[i] = ca + sign * cb;
    const auto idx = [](const LaurentSeries& s, long kk) {
      return kk < s.leading_order() || kk >= s.end() ? Complex{} : s.majorant()[static_cast<std::size_t>(kk - s.leading_order())];
    };
    m[i] = idx(a, k) + idx(b, k);
  }
  return {a.center(), lead, std::move(c), std::move(m)};
}

inline LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return add_sub(a, b, 1.0); }
inline LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return add_sub(a, b, -1.0); }

inline LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.is_zero() || b.is_zero()) {
    const long ea = a.is_zero() ? a.end() : a.leading_order();
    const long eb = b.is_zero() ? b.end() : b.leading_order();
    return LaurentSeries::zero(a.center(), ea + eb);
  }
  const std::size_t n = std::min(a.length(), b.length());
  return {a.center(), a.leading_order() + b.leading_order(), series::mul(a.coeffs(), b.coeffs(), n),
          series::mul(a.majorant(), b.majorant(), n)};
}

inline LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) {
  if (b.is_zero()) throw SingularPoint("Laurent division by a series that vanishes to truncation");
  if (a.is_zero()) return LaurentSeries::zero(a.center(), a.end() - b.leading_order());
  const std::size_t n = std::min(a.length(), b.length());
  const auto binv = laurent_detail::inv_majorant(b.coeffs(), b.majorant(), n);
  return {a.center(), a.leading_order() - b.leading_order(), series::div(a.coeffs(), b.coeffs(), n),
          series::mul(a.majorant(), binv, n)};
}

inline LaurentSeries pow(const LaurentSeries& a, long k) {
  if (k == 0) {
    const auto n = static_cast<std::size_t>(std::max<long>(1, a.end() - a.leading_order()));
    series::Coeffs one(n);
    one[0] = 1.0;
    return {a.center(), 0, one, one};
  }
  if (a.is_zero()) {
    if (k < 0) throw SingularPoint("negative power of a series that vanishes to truncation");
    return LaurentSeries::zero(a.center(), a.end() * k);
  }
  const std::size_t n = a.length();
  if (k > 0)
    return {a.center(), a.leading_order() * k, series::pow_int(a.coeffs(), k, n), series::pow_int(a.majorant(), k, n)};
  const auto base = series::pow_int(a.coeffs(), -k, n);
  const auto bm = series::pow_int(a.majorant(), -k, n);
  return {a.center(), a.leading_order() * k, series::inv(base, n), laurent_detail::inv_majorant(base, bm, n)};
}

/// a^mu on the sheet `branch`; the branch is attached to the unit part of a.
inline LaurentSeries rpow(const LaurentSeries& a, double mu, std::optional<int> branch) {
  if (is_integral(mu)) return pow(a, static_cast<long>(mu));
  if (a.is_zero()) throw EssentialOrBranch("real power of a series that vanishes to truncation");
  const double offset = static_cast<double>(a.leading_order()) * mu;
  if (std::abs(offset - std::nearbyint(offset)) > 1e-9)
    throw EssentialOrBranch("non-integral exponent offset " + std::to_string(offset));
  const std::size_t n = a.length();
  const Complex head = real_power_value(a.coeffs()[0], mu, branch);
  series::Coeffs y(n);
  y[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) y[j] = -std::abs(a.majorant()[j]) / std::abs(a.coeffs()[0]);
  auto maj = series::pow_real(y, -std::abs(mu), 1.0, n);
  for (auto& x : maj) x = std::abs(head) * std::abs(x);
  return {a.center(), static_cast<long>(std::nearbyint(offset)), series::pow_real(a.coeffs(), mu, head, n), maj};
}

inline LaurentSeries log(const LaurentSeries& a, std::optional<int> branch) {
  if (a.is_zero() || a.leading_order() != 0) throw EssentialOrBranch("logarithmic singularity");
  const std::size_t n = a.length();
  const Complex head = log_value(a.coeffs()[0], branch);
  series::Coeffs y(n);
  y[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) y[j] = -std::abs(a.majorant()[j]) / std::abs(a.coeffs()[0]);
  auto maj = series::log(y, 0.0, n);
  for (auto& x : maj) x = std::abs(x);
  maj[0] = std::abs(head);
  return {a.center(), 0, series::log(a.coeffs(), head, n), maj};
}

namespace laurent_detail {

struct Visitor {
  SpherePoint center;  // reported center; expansion variable is always t
  Complex c0;          // finite expansion point (0 when expanding at infinity after z = 1/t)
  std::size_t n;

  LaurentSeries constant(Complex c) const {
    if (c == Complex{}) return LaurentSeries::zero(center, static_cast<long>(n));
    series::Coeffs v(n);
    v[0] = c;
    return {center, 0, v, abs_coeffs(v)};
  }
  LaurentSeries var() const {
    series::Coeffs v(n);
    if (c0 == Complex{}) {
      v[0] = 1.0;
      return {center, 1, v, v};
    }
    v[0] = c0;
    if (n > 1) v[1] = 1.0;
    return {center, 0, v, abs_coeffs(v)};
  }
  LaurentSeries neg(const LaurentSeries& a) const { return -a; }
  LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b) const { return a + b; }
  LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b) const { return a - b; }
  LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) const { return a * b; }
  LaurentSeries div(const LaurentSeries& a, const LaurentSeries& b) const { return a / b; }
  LaurentSeries ipow(const LaurentSeries& a, long k) const { return pow(a, k); }
  LaurentSeries rpow(const LaurentSeries& a, double mu, std::optional<int> br) const {
    return framed::rpow(a, mu, br);
  }
  LaurentSeries log(const LaurentSeries& a, std::optional<int> br) const { return framed::log(a, br); }
};

}  // namespace laurent_detail

/// Laurent expansion of e at `center` through exponent N (inclusive).
/// Throws EssentialOrBranch if e is not Laurent there.
inline LaurentSeries laurent(const Expr& e, SpherePoint center, long N) {
  const Expr x = center.is_infinite() ? substitute(e, Expr::constant(1.0) / Expr::var()) : e;
  const Complex c0 = center.is_infinite() ? Complex{} : center.z;
  std::size_t n = static_cast<std::size_t>(std::max<long>(N, 0)) + 12;
  for (int attempt = 0; attempt < 8; ++attempt) {
    laurent_detail::Visitor v{center, c0, n};
    LaurentSeries s = fold<LaurentSeries>(x, v);
    if (s.end() > N) {
      if (s.is_zero()) return LaurentSeries::zero(center, N + 1);
      // Report through N, but always keep the leading coefficient.
      return s.truncated(std::max(N + 1, s.leading_order() + 1));
    }
    n += static_cast<std::size_t>(N - s.end() + 1) + 16;
  }
  throw EssentialOrBranch("Laurent expansion did not reach the requested order");
}

inline LaurentSeries laurent(const Expr& e, Complex center, long N) {
  return laurent(e, SpherePoint::finite(center), N);
}

/// Order of vanishing (negative for poles) of e at p; `probe` is the expansion depth.
inline long order_at(const Expr& e, SpherePoint p, long probe = 16) {
  const LaurentSeries s = laurent(e, p, probe);
  if (s.is_zero()) throw DegenerateData("expression vanishes to order " + std::to_string(probe));
  return s.leading_order();
}

}  // namespace framed

namespace framed {

/// Termwise derivative d/dt (finite centers; the local variable is t = z - center).
inline LaurentSeries derivative(const LaurentSeries& a) {
  if (a.is_zero()) return LaurentSeries::zero(a.center(), a.end() - 1);
  series::Coeffs c(a.length()), m(a.length());
  for (std::size_t i = 0; i < a.length(); ++i) {
    const double k = static_cast<double>(a.leading_order() + static_cast<long>(i));
    c[i] = k * a.coeffs()[i];
    m[i] = std::abs(k) * a.majorant()[i];
    if (k == 0.0) m[i] = 0.0;
  }
  // A vanishing constant term must not be mistaken for a cancellation residue.
  LaurentSeries r(a.center(), a.leading_order() - 1, std::move(c), std::move(m));
  return r;
}

/// Series from explicit coefficients of t^lead, t^(lead+1), ...
inline LaurentSeries make_laurent(long lead, const series::Coeffs& c, SpherePoint center = SpherePoint::finite(0.0)) {
  series::Coeffs m(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) m[i] = std::abs(c[i]);
  return {center, lead, c, m};
}

}  // namespace framed
