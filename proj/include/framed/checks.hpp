#pragma once

// Residual suites for a scene: null lift, Gauss equation, Ros identity, conformality,
// end classification and monodromy, as rows of pass/fail results.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "framed/divisor.hpp"
#include "framed/monodromy.hpp"
#include "framed/null_lift.hpp"
#include "framed/representations.hpp"

namespace framed {

inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

/// Residuals at h, h/2, h/4, ...; passes when every halving gains order >= min_order or the
/// residual has reached the rounding floor.
struct ConvergenceStudy {
  std::vector<double> h, residual;
  double min_order = 2.0;
  double floor = 1e-11;

  double worst_order() const {
    double w = INFINITY;
    for (std::size_t i = 1; i < residual.size(); ++i)
      if (residual[i - 1] > floor) w = std::min(w, observed_order(residual[i - 1], residual[i]));
    return w;
  }
  bool pass(double required = 1.9) const { return worst_order() >= required; }
};

template <class Residual>
ConvergenceStudy convergence_study(Residual&& r, double h0, int levels = 3, double floor = 1e-11) {
  ConvergenceStudy s;
  s.floor = floor;
  for (int i = 0; i < levels; ++i) {
    const double h = h0 / std::pow(2.0, i);
    s.h.push_back(h);
    s.residual.push_back(r(h));
  }
  return s;
}

/// |K + e^{-2 lambda} Delta_h lambda| / max(1, |K|) with the five-point Laplacian.
inline double gauss_residual(const SurfaceFields& F, Complex z, double h) {
  auto lam = [&](Complex w) { return 0.5 * std::log(metric_factor(F, w)); };
  const double lap =
      (lam(z + h) + lam(z - h) + lam(z + Complex(0, h)) + lam(z - Complex(0, h)) - 4.0 * lam(z)) / (h * h);
  const double K = gauss_curvature(F, z);
  return std::abs(K + lap / metric_factor(F, z)) / std::max(1.0, std::abs(K));
}

/// The null-lift residual det(F^{-1} dF) at z, with F from omega(f, g) for explicit Bryant
/// data and from the local Taylor lift of (g, eta) otherwise.
inline std::function<double(double)> null_residual_at(const SurfaceFields& F, Complex z) {
  if (F.kind == SurfaceFields::Kind::BryantExplicit) {
    const Mat2 ref = omega_matrix(*F.f, *F.g, z);
    const Expr f = *F.f, g = *F.g;
    return [=](double h) {
      return null_residual([&](Complex x) { return omega_near(f, g, x, ref); }, z, h);
    };
  }
  const auto E = lift_taylor(eval_jet(F.need_g(), z, 30), eval_jet(F.phase * F.need_eta(), z, 30), 30);
  return [=](double h) { return null_residual([&](Complex x) { return eval_taylor(E, x - z); }, z, h); };
}

/// max over the three components of the Ros identity residual, relative to |X_w|.
inline double ros_residual(const SurfaceFields& F, const HarmonicForm& w, Complex z, double h) {
  const auto r = ros_identity_residual(F, w, z, h);
  const auto X = ros_field(F, w, z);
  const double scale = std::max({1.0, std::abs(X[0]), std::abs(X[1]), std::abs(X[2])});
  return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])}) / scale;
}

/// Deterministic sample points away from punctures, zeros and poles of the data.
inline std::vector<Complex> check_points(const SurfaceSpec& s, const SurfaceFields& F, std::size_t count = 3) {
  std::vector<Complex> avoid = singular_candidates(s, F);
  if (F.sigma)
    for (const auto& c : candidate_points(*F.sigma)) avoid.push_back(c);
  static const Complex pool[] = {{0.31, 0.47},  {0.55, -0.73}, {-0.62, 0.29}, {-0.4, -0.55},
                                 {1.37, 0.88},  {0.12, 1.21},  {-1.3, 0.6},   {0.9, 0.23}};
  std::vector<Complex> out;
  for (const Complex& z : pool) {
    if (out.size() >= count) break;
    bool ok = true;
    for (const auto& a : avoid) ok = ok && std::abs(z - a) > 0.2;
    if (ok) out.push_back(z);
  }
  return out;
}

struct CheckRow {
  std::string suite;
  std::string detail;
  double value = 0.0;      // residual, observed order, or flag
  double threshold = 0.0;
  bool pass = true;
  bool skipped = false;
};

struct CheckReport {
  std::string scene;
  std::vector<CheckRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.skipped && !r.pass) return false;
    return true;
  }
};

struct CheckOptions {
  double tol = 1e-9;          // pointwise algebraic identities, relative
  double min_order = 1.9;     // finite-difference convergence
  int monodromy_nodes = 512;
};

inline CheckReport run_checks(const SurfaceSpec& s, const CheckOptions& opt = {}) {
  CheckReport rep;
  rep.scene = s.name;
  const SurfaceFields F = make_fields(s);
  auto add = [&](CheckRow r) { rep.rows.push_back(std::move(r)); };
  auto skip = [&](const std::string& suite, const std::string& why) { add({suite, why, 0.0, 0.0, true, true}); };
  auto guarded = [&](const std::string& suite, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      add({suite, std::string("error: ") + e.what(), 0.0, 0.0, false, false});
    }
  };

  // ends and divisor
  if (!F.has_metric()) {
    skip("ends", "no metric for Gauss-map-only data");
  } else {
    guarded("ends", [&] {
      const Divisor D = fundamental_divisor(s, F);
      add({"ends", "D = " + D.to_string(), static_cast<double>(D.degree()), 0.0, true, false});
    });
  }
  // framedness
  guarded("monodromy", [&] {
    const MonodromyReport m = monodromy_report(s, opt.monodromy_nodes);
    add({"monodromy", m.framed ? "framed" : "not framed", m.framed ? 1.0 : 0.0, 0.0, true, false});
  });

  const std::vector<Complex> pts = F.has_metric() ? check_points(s, F) : std::vector<Complex>{};
  // Gauss equation
  if (!F.has_metric()) {
    skip("gauss", "no metric");
  } else {
    for (const Complex& z : pts)
      guarded("gauss", [&] {
        const auto st = convergence_study([&](double h) { return gauss_residual(F, z, h); }, 2e-2, 3, 1e-9);
        add({"gauss", "order at z = " + format_complex(z), st.worst_order(), opt.min_order, st.pass(opt.min_order), false});
      });
  }
  // null lift
  if (!F.g || (!F.eta && !F.f)) {
    skip("null", "needs (g, eta) or (f, g)");
  } else if (is_constant_function(*F.g)) {
    skip("null", "constant Gauss map");
  } else {
    for (const Complex& z : pts)
      guarded("null", [&] {
        const auto st = convergence_study(null_residual_at(F, z), 1e-2, 3, 1e-11);
        add({"null", "order at z = " + format_complex(z), st.worst_order(), opt.min_order, st.pass(opt.min_order), false});
      });
  }
  // Weierstrass identities
  if (F.kind != SurfaceFields::Kind::Weierstrass) {
    skip("conformal", "minimal surfaces only");
    skip("ros", "minimal surfaces only");
  } else {
    for (const Complex& z : pts)
      guarded("conformal", [&] {
        const auto phi = immersion_integrands(F, z);
        Complex sq{};
        double n2 = 0.0;
        for (const auto& c : phi) {
          sq += c * c;
          n2 += std::norm(c);
        }
        const double e2l = metric_factor(F, z);
        const double r = std::max(std::abs(sq) / n2, std::abs(n2 - 2.0 * e2l) / (2.0 * e2l));
        add({"conformal", "null and |Phi|^2 = 2 e^{2 lambda} at z = " + format_complex(z), r, opt.tol, r < opt.tol, false});
      });
    if (!is_constant_function(*F.g)) {
      const std::pair<const char*, HarmonicForm> forms[] = {
          {"dx1", dx_form(F, 0)}, {"dx3", dx_form(F, 2)}, {"*dx3", star(dx_form(F, 2))}};
      for (const Complex& z : pts)
        for (const auto& [label, w] : forms)
          guarded("ros", [&] {
            const auto st = convergence_study([&](double h) { return ros_residual(F, w, z, h); }, 2e-2, 3, 1e-9);
            add({"ros", std::string(label) + " order at z = " + format_complex(z), st.worst_order(), opt.min_order,
                 st.pass(opt.min_order), false});
          });
    } else {
      skip("ros", "flat: X_w is harmonic and the identity is trivial");
    }
  }
  return rep;
}

}  // namespace framed
