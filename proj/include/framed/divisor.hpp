#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "framed/laurent.hpp"
#include "framed/rational.hpp"
#include "framed/surface.hpp"

namespace framed {

/// Formal integer combination of points of the Riemann sphere.
class Divisor {
 public:
  struct Entry {
    SpherePoint point;
    long mult;
  };

  Divisor() = default;
  Divisor(std::initializer_list<Entry> es) {
    for (const auto& e : es) add(e.point, e.mult);
  }

  void add(const SpherePoint& p, long m, double tol = 1e-9) {
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (near(it->point, p, tol)) {
        it->mult += m;
        if (it->mult == 0) entries_.erase(it);
        return;
      }
    }
    if (m != 0) entries_.push_back({p, m});
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  long degree() const {
    return std::accumulate(entries_.begin(), entries_.end(), 0L, [](long s, const Entry& e) { return s + e.mult; });
  }
  long multiplicity(const SpherePoint& p, double tol = 1e-9) const {
    for (const auto& e : entries_)
      if (near(e.point, p, tol)) return e.mult;
    return 0;
  }
  bool all_negative() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.mult < 0; });
  }

  friend Divisor operator+(Divisor a, const Divisor& b) {
    for (const auto& e : b.entries_) a.add(e.point, e.mult);
    return a;
  }

  std::string to_string() const {
    if (entries_.empty()) return "0";
    std::string s;
    for (const auto& e : entries_) {
      if (!s.empty()) s += e.mult < 0 ? " - " : " + ";
      else if (e.mult < 0) s += "-";
      const long a = std::abs(e.mult);
      s += (a == 1 ? std::string() : std::to_string(a) + "*") + "(" + format_point(e.point) + ")";
    }
    return s;
  }

 private:
  std::vector<Entry> entries_;
};

// ---- local orders ----------------------------------------------------------------

inline constexpr long kOrderProbe = 16;

/// Order at p of the function e (chart value, no transformation).
inline long function_order(const Expr& e, const SpherePoint& p) { return order_at(e, p, kOrderProbe); }

/// Order at p of the 1-form e dz.
inline long form1_order(const Expr& e, const SpherePoint& p) {
  return function_order(e, p) - (p.is_infinite() ? 2 : 0);
}

/// Order at p of the quadratic differential e dz^2.
inline long form2_order(const Expr& e, const SpherePoint& p) {
  return function_order(e, p) - (p.is_infinite() ? 4 : 0);
}

/// Local degree of the map G at p (G finite at p): smallest r > 0 with G - G(p) ~ t^r.
inline long ramification(const Expr& G, const SpherePoint& p) {
  const LaurentSeries s = laurent(G, p, kOrderProbe + 8);
  if (!s.is_zero() && s.leading_order() < 0) throw Error("ramification needs a finite value");
  for (long k = std::max<long>(1, s.leading_order()); k <= s.truncation(); ++k) {
    const auto i = static_cast<std::size_t>(k - s.leading_order());
    if (std::abs(s.coeffs()[i]) > LaurentSeries::kCancelTol * std::max(std::abs(s.majorant()[i]), 1e-300))
      return k;
  }
  throw DegenerateData("map is constant to order " + std::to_string(s.truncation()));
}

/// Order of dg at p, using 1/g where g has a pole.
inline long dg_order(const Expr& g, const SpherePoint& p) {
  const long og = function_order(g, p);
  const Expr G = og < 0 ? Expr::constant(1.0) / g : g;
  return ramification(G, p) - 1;
}

inline bool is_zero_function(const Expr& e) {
  if (!is_constant_function(e)) return false;
  try {
    return std::abs(e.eval(Complex(0.3137, 0.2171))) < 1e-12;
  } catch (const Error&) {
    return false;
  }
}

// ---- ends ----------------------------------------------------------------------

/// Exponent of |t| in e^{2 lambda} in the local chart at p.
inline long metric_leading_exponent(const SurfaceFields& F, const SpherePoint& p) {
  try {
    if (F.kind == SurfaceFields::Kind::Intrinsic) return 2 * form1_order(*F.h, p);
    if (F.kind == SurfaceFields::Kind::GaussMapOnly) throw Unsupported("no metric for Gauss-map-only data");
    const long eta = form1_order(F.need_eta(), p);
    const long gpole = is_constant_function(*F.g) ? 0 : std::min(0L, function_order(*F.g, p));
    return 2 * eta + 4 * gpole;
  } catch (const EssentialOrBranch& e) {
    throw IrregularEnd(std::string("metric is not of Laurent type at ") + format_point(p) + ": " + e.what());
  }
}

/// Order m >= 1 of the end at p.
inline long end_order(const SurfaceFields& F, const SpherePoint& p) {
  const long lead = metric_leading_exponent(F, p);
  if (lead >= 0) throw NotAnEnd("metric extends over " + format_point(p));
  if (lead % 2 != 0) throw IrregularEnd("odd leading exponent " + std::to_string(lead));
  return std::max(1L, -lead / 2 - 1);
}

inline long end_order(const SurfaceSpec& s, const SpherePoint& p) { return end_order(make_fields(s), p); }

// ---- branch points ---------------------------------------------------------------

inline bool is_puncture(const SurfaceSpec& s, const SpherePoint& p, double tol = 1e-9) {
  return std::any_of(s.punctures.begin(), s.punctures.end(), [&](const SpherePoint& q) { return near(p, q, tol); });
}

/// Points where sigma vanishes to higher order than dg.
inline Divisor branch_divisor(const SurfaceSpec& s, const SurfaceFields& F) {
  Divisor d;
  if (s.torus || F.kind == SurfaceFields::Kind::Intrinsic) return d;
  const Expr& sigma = F.need_sigma();
  const Expr& g = F.need_g();
  if (is_zero_function(sigma) || is_constant_function(g)) return d;
  std::vector<SpherePoint> cands;
  for (const Expr& e : {sigma, g, differentiate(g)})
    for (const Complex& c : candidate_points(e)) cands.push_back(SpherePoint::finite(c));
  cands.push_back(SpherePoint::infinity());
  std::vector<SpherePoint> seen;
  for (const auto& p : cands) {
    if (is_puncture(s, p)) continue;
    if (std::any_of(seen.begin(), seen.end(), [&](const SpherePoint& q) { return near(p, q, 1e-9); })) continue;
    seen.push_back(p);
    const long m = form2_order(sigma, p) - dg_order(g, p);
    if (m > 0) d.add(p, m);
  }
  return d;
}

inline Divisor branch_divisor(const SurfaceSpec& s) { return branch_divisor(s, make_fields(s)); }

struct EndInfo {
  SpherePoint point;
  long order;
};

inline std::vector<EndInfo> ends(const SurfaceSpec& s, const SurfaceFields& F) {
  std::vector<EndInfo> out;
  for (const auto& p : s.punctures) out.push_back({p, end_order(F, p)});
  return out;
}

/// D = sum(-m_end P_end) + sum(m_branch P_branch).
inline Divisor fundamental_divisor(const SurfaceSpec& s, const SurfaceFields& F) {
  Divisor d;
  for (const auto& e : ends(s, F)) d.add(e.point, -e.order);
  return d + branch_divisor(s, F);
}

inline Divisor fundamental_divisor(const SurfaceSpec& s) { return fundamental_divisor(s, make_fields(s)); }

// ---- h^1 and the index bound ------------------------------------------------------

/// dim { meromorphic 1-forms w on the sphere with div(w) >= D }, by linear algebra on
/// w = p(z) / prod (z - P)^{a_P} dz with a_P = max(0, -n_P).
inline long h1_exact_genus0(const Divisor& D) {
  long A = 0, n_inf = 0;
  std::vector<std::pair<Complex, long>> zeros;
  for (const auto& e : D.entries()) {
    if (e.point.is_infinite()) {
      n_inf = e.mult;
    } else if (e.mult < 0) {
      A += -e.mult;
    } else {
      zeros.emplace_back(e.point.z, e.mult);
    }
  }
  const long dmax = A - 2 - n_inf;
  if (dmax < 0) return 0;
  const auto cols = static_cast<long>(dmax + 1);
  long rows = 0;
  for (const auto& zp : zeros) rows += zp.second;
  if (rows == 0) return cols;
  // Row (P, j): j-th Taylor coefficient of p at P, sum_k C(k, j) P^{k-j} c_k = 0.
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rows, cols);
  long r = 0;
  for (const auto& [P, n] : zeros) {
    for (long j = 0; j < n; ++j, ++r) {
      for (long k = j; k < cols; ++k) {
        double binom = 1.0;
        for (long i = 1; i <= j; ++i) binom = binom * static_cast<double>(k - j + i) / static_cast<double>(i);
        M(r, k) = binom * std::pow(P, static_cast<int>(k - j));
      }
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
  lu.setThreshold(1e-10);
  return cols - static_cast<long>(lu.rank());
}

/// Riemann-Roch on a torus for the divisors we support.
inline long h1_torus(const Divisor& D) {
  if (D.empty()) return 1;
  const bool nonpos = std::all_of(D.entries().begin(), D.entries().end(), [](const auto& e) { return e.mult <= 0; });
  const bool nonneg = std::all_of(D.entries().begin(), D.entries().end(), [](const auto& e) { return e.mult >= 0; });
  if (nonpos) return -D.degree();
  if (nonneg) return 0;
  throw Unsupported("mixed-sign divisors on a torus");
}

struct IndexBound {
  long h1 = 0;
  long numerator = 0;  // bound = numerator / 3
  double value() const { return static_cast<double>(numerator) / 3.0; }
  long ceiling() const { return numerator >= 0 ? (numerator + 2) / 3 : -((-numerator) / 3); }
  std::string fraction() const {
    const long g = std::gcd(std::abs(numerator), 3L);
    const long n = numerator / g, d = 3 / g;
    return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d);
  }
};

/// Two-sided: (2 h1 - 3)/3. One-sided: (h1 - 3)/3 for the divisor on the double cover.
inline IndexBound index_bound(int genus, const Divisor& D, Sidedness sided) {
  long h1 = 0;
  if (genus == 0) h1 = h1_exact_genus0(D);
  else if (genus == 1) h1 = h1_torus(D);
  else throw Unsupported("genus >= 2");
  return {h1, sided == Sidedness::TwoSided ? 2 * h1 - 3 : h1 - 3};
}

// ---- weighted L^2 membership ---------------------------------------------------------

/// True iff div(w dz) >= D_Sigma.
inline bool l2star_membership(const Expr& w, const SurfaceSpec& s, const SurfaceFields& F) {
  const Divisor D = fundamental_divisor(s, F);
  std::vector<SpherePoint> pts{SpherePoint::infinity()};
  for (const auto& c : candidate_points(w)) pts.push_back(SpherePoint::finite(c));
  for (const auto& e : D.entries()) pts.push_back(e.point);
  for (const auto& p : pts) {
    if (is_zero_function(w)) return true;
    if (form1_order(w, p) < D.multiplicity(p)) return false;
  }
  return true;
}

inline bool l2star_membership(const Expr& w, const SurfaceSpec& s) { return l2star_membership(w, s, make_fields(s)); }

}  // namespace framed
