#pragma once

// Analytic continuation of expressions along paths, and monodromy of the Gauss map
// and of the immersion periods around the generators of the fundamental group.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "framed/moebius.hpp"
#include "framed/rational.hpp"
#include "framed/surface.hpp"

namespace framed {

/// Tracks the branch of every z^mu and log node while the variable moves continuously.
class Continuation {
 public:
  Continuation(std::vector<Expr> exprs, Complex z0, double singular_tol = 1e-12)
      : exprs_(std::move(exprs)), tol_(singular_tol) {
    if (!evaluate(z0, nullptr, values_)) throw ContinuationFailure("cannot start at " + format_complex(z0));
    z_ = z0;
  }

  Complex position() const { return z_; }
  const std::vector<Complex>& values() const { return values_; }
  Complex value(std::size_t i) const { return values_.at(i); }

  /// Move along the straight segment to z, subdividing while any tracked argument
  /// jumps by more than max_jump.
  void move_to(Complex z, double max_jump = kPi / 6) { walk(z, max_jump, 0); }

 private:
  std::vector<Expr> exprs_;
  double tol_;
  Complex z_{};
  std::vector<Complex> values_;
  std::unordered_map<const ExprNode*, double> angle_;  // unwrapped argument of each multivalued base

  void walk(Complex z, double max_jump, int depth) {
    if (depth > 40) throw ContinuationFailure("step control failed near " + format_complex(z));
    std::unordered_map<const ExprNode*, double> trial = angle_;
    std::vector<Complex> vals;
    double jump = 0.0;
    if (evaluate(z, &trial, vals, &jump) && jump <= max_jump && moderate_change(vals)) {
      angle_ = std::move(trial);
      values_ = std::move(vals);
      z_ = z;
      return;
    }
    const Complex mid = 0.5 * (z_ + z);
    if (std::abs(z - z_) < 1e-14 * (1.0 + std::abs(z)))
      throw ContinuationFailure("path passes through a singularity near " + format_complex(z));
    walk(mid, max_jump, depth + 1);
    walk(z, max_jump, depth + 1);
  }

  bool moderate_change(const std::vector<Complex>& vals) const {
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (std::abs(vals[i] - values_[i]) > 0.5 * (std::abs(vals[i]) + std::abs(values_[i])) + 1.0) return false;
    return true;
  }

  // With `state == nullptr` the stored branch indices seed the angles (first evaluation).
  bool evaluate(Complex z, std::unordered_map<const ExprNode*, double>* state, std::vector<Complex>& out,
                double* max_jump = nullptr) {
    std::unordered_map<const ExprNode*, double>& angles = state ? *state : angle_;
    std::unordered_map<const ExprNode*, Complex> memo;
    bool ok = true;
    double jump = 0.0;
    std::function<Complex(const Expr&)> go = [&](const Expr& x) -> Complex {
      if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
      Complex r;
      switch (x.op()) {
        case Op::Const: r = x.value(); break;
        case Op::Var: r = z; break;
        case Op::Neg: r = -go(x.arg(0)); break;
        case Op::Add: r = go(x.arg(0)) + go(x.arg(1)); break;
        case Op::Sub: r = go(x.arg(0)) - go(x.arg(1)); break;
        case Op::Mul: r = go(x.arg(0)) * go(x.arg(1)); break;
        case Op::Div: {
          const Complex d = go(x.arg(1));
          if (std::abs(d) < tol_) ok = false;
          r = go(x.arg(0)) / d;
          break;
        }
        case Op::IntPow: {
          const Complex b = go(x.arg(0));
          if (x.int_exponent() < 0 && std::abs(b) < tol_) ok = false;
          r = std::pow(b, static_cast<int>(x.int_exponent()));
          break;
        }
        case Op::RealPow:
        case Op::Log: {
          const Complex b = go(x.arg(0));
          if (x.op() == Op::RealPow && is_integral(x.real_exponent())) {
            r = real_power_value(b, x.real_exponent(), 0);
            break;
          }
          if (std::abs(b) < tol_) {
            ok = false;
            r = Complex{};
            break;
          }
          const double principal = std::arg(b);
          double ang;
          auto it = angles.find(x.id());
          if (state == nullptr || it == angles.end()) {
            ang = principal + 2.0 * kPi * static_cast<double>(x.branch().value_or(0));
          } else {
            ang = principal + 2.0 * kPi * std::nearbyint((it->second - principal) / (2.0 * kPi));
            jump = std::max(jump, std::abs(ang - it->second));
          }
          angles[x.id()] = ang;
          const double lr = std::log(std::abs(b));
          r = x.op() == Op::Log ? Complex(lr, ang) : std::exp(x.real_exponent() * Complex(lr, ang));
          break;
        }
      }
      memo[x.id()] = r;
      return r;
    };
    out.clear();
    for (const auto& e : exprs_) out.push_back(go(e));
    for (const auto& v : out)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) ok = false;
    if (max_jump) *max_jump = jump;
    return ok;
  }
};

// ---- loops ---------------------------------------------------------------------------

struct LoopGenerator {
  std::string label;
  Complex center{};
  double radius = 1.0;
  bool clockwise = false;  // loops around infinity run clockwise in the z chart
  bool translation = false;
  Complex shift{};  // torus generators: straight path z -> z + shift
  Complex base{};

  Complex point(double t) const {
    if (translation) return base + t * shift;
    return center + std::polar(radius, (clockwise ? -1.0 : 1.0) * 2.0 * kPi * t);
  }
  Complex tangent(double t) const {
    if (translation) return shift;
    const double s = clockwise ? -1.0 : 1.0;
    return s * 2.0 * kPi * kI * std::polar(radius, s * 2.0 * kPi * t);
  }
};

/// Finite points where any defining expression may be singular or branch.
inline std::vector<Complex> singular_candidates(const SurfaceSpec& s, const SurfaceFields& F) {
  std::vector<Complex> pts;
  for (const auto* e : {&F.g, &F.eta, &F.f, &F.h})
    if (*e)
      for (const auto& c : candidate_points(**e)) pts.push_back(c);
  for (const auto& p : s.punctures)
    if (!p.is_infinite()) pts.push_back(p.z);
  return cluster_points(pts, 1e-9);
}

/// One small loop per puncture (genus 0), or the two lattice translations (torus).
inline std::vector<LoopGenerator> loop_generators(const SurfaceSpec& s, const SurfaceFields& F) {
  std::vector<LoopGenerator> out;
  if (s.torus) {
    const Complex b = 0.1234 * s.period1 + 0.2345 * s.period2;
    out.push_back({"omega1", {}, 0.0, false, true, s.period1, b});
    out.push_back({"omega2", {}, 0.0, false, true, s.period2, b});
    return out;
  }
  const auto pts = singular_candidates(s, F);
  for (const auto& p : s.punctures) {
    LoopGenerator L;
    L.label = format_point(p);
    if (p.is_infinite()) {
      double far = 1.0;
      for (const auto& q : pts) far = std::max(far, std::abs(q));
      L.radius = 2.0 * far + 1.0;
      L.clockwise = true;
    } else {
      double nearest = 1.0;
      for (const auto& q : pts)
        if (std::abs(q - p.z) > 1e-9) nearest = std::min(nearest, std::abs(q - p.z));
      L.center = p.z;
      L.radius = 0.5 * nearest;
    }
    out.push_back(L);
  }
  return out;
}

struct MonodromyReport {
  std::vector<std::string> generators;
  std::vector<Moebius> g_monodromy;                  // g after the loop = M(g before)
  std::vector<std::optional<std::array<double, 3>>> periods;  // Re of the loop integral of Phi
  bool framed = true;
  bool two_sided_consistent = true;
};

namespace detail {

/// Möbius map sending before[i] to after[i], chosen from well-separated sample triples.
inline Moebius loop_moebius(const std::vector<Complex>& before, const std::vector<Complex>& after, double tol) {
  bool same = true;
  for (std::size_t i = 0; i < before.size(); ++i)
    if (chordal_distance(SpherePoint::finite(before[i]), SpherePoint::finite(after[i])) > tol) same = false;
  if (same) return Moebius();
  double best = -1.0;
  std::array<std::size_t, 3> pick{0, 1, 2};
  const std::size_t n = before.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        auto d = [&](std::size_t i, std::size_t j) {
          return chordal_distance(SpherePoint::finite(before[i]), SpherePoint::finite(before[j]));
        };
        const double sep = std::min({d(a, b), d(a, c), d(b, c)});
        if (sep > best) {
          best = sep;
          pick = {a, b, c};
        }
      }
  if (best < 1e-6) throw DegenerateData("Gauss map nearly constant along the loop but not periodic");
  std::array<SpherePoint, 3> from, to;
  for (int k = 0; k < 3; ++k) {
    from[k] = SpherePoint::finite(before[pick[k]]);
    to[k] = SpherePoint::finite(after[pick[k]]);
  }
  return moebius_from_points(from, to);
}

}  // namespace detail

/// Continue g (and eta) twice around each generator; compare the laps and integrate Phi.
inline MonodromyReport monodromy_report(const SurfaceSpec& s, int nodes = 1024, double tol = 1e-8) {
  const SurfaceFields F = make_fields(s);
  MonodromyReport rep;
  const bool have_g = F.g.has_value();
  const bool have_eta = F.eta.has_value() && have_g;
  std::vector<Expr> exprs;
  if (have_g) exprs.push_back(*F.g);
  if (have_eta) exprs.push_back(*F.eta);
  for (const auto& L : loop_generators(s, F)) {
    rep.generators.push_back(L.label);
    if (exprs.empty()) {
      rep.g_monodromy.emplace_back();
      rep.periods.push_back(std::nullopt);
      continue;
    }
    Continuation C(exprs, L.point(0.0));
    const std::array<double, 5> samples{0.0, 0.17, 0.39, 0.61, 0.83};
    std::vector<Complex> first, second;
    std::array<Complex, 3> integral{};
    std::array<double, 3> n_start{}, n_end{};
    for (int lap = 0; lap < 2; ++lap) {
      std::size_t next = 0;
      for (int j = 0; j < nodes; ++j) {
        const double t = static_cast<double>(j) / nodes;
        C.move_to(L.point(t + lap));
        while (next < samples.size() && std::abs(samples[next] - t) < 0.5 / nodes) {
          (lap == 0 ? first : second).push_back(C.value(0));
          ++next;
        }
        if (lap == 0 && have_eta) {
          const Complex g = C.value(0), eta = s.phase * C.value(1);
          const std::array<Complex, 3> phi{0.5 * (1.0 - g * g) * eta, 0.5 * kI * (1.0 + g * g) * eta, g * eta};
          for (int k = 0; k < 3; ++k) integral[k] += phi[k] * L.tangent(t) / static_cast<double>(nodes);
        }
      }
      if (lap == 0) C.move_to(L.point(1.0));
    }
    Moebius M = detail::loop_moebius(first, second, tol);
    rep.g_monodromy.push_back(M);
    if (!M.is_identity(tol)) rep.framed = false;
    auto normal_of = [](Complex g) {
      const double op = 1.0 + std::norm(g);
      return std::array<double, 3>{2.0 * g.real() / op, 2.0 * g.imag() / op, (std::norm(g) - 1.0) / op};
    };
    n_start = normal_of(first.front());
    n_end = normal_of(second.front());
    double dn = 0.0;
    for (int k = 0; k < 3; ++k) dn += std::abs(n_start[k] - n_end[k]);
    if (s.sidedness == Sidedness::TwoSided && dn > 1e-6) rep.two_sided_consistent = false;
    if (have_eta) {
      rep.periods.push_back(std::array<double, 3>{integral[0].real(), integral[1].real(), integral[2].real()});
    } else {
      rep.periods.push_back(std::nullopt);
    }
  }
  return rep;
}

}  // namespace framed
