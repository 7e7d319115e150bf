#pragma once

// Euclidean and hyperbolic representations, the Lawson correspondence, harmonic forms
// and the Ros vector-field identity.

#include <array>
#include <cmath>
#include <vector>

#include "framed/divisor.hpp"
#include "framed/null_lift.hpp"
#include "framed/quadrature.hpp"

namespace framed {

struct IntrinsicSample {
  Complex z;
  double e2l = 0.0;
  double K = 0.0;
  Complex sigma;
};

inline IntrinsicSample intrinsic_sample(const SurfaceFields& F, Complex z) {
  return {z, metric_factor(F, z), gauss_curvature(F, z), F.sigma ? hopf_value(F, z) : Complex{}};
}

/// Intrinsic data of a Bryant surface from jets of (f, g): sigma = -S{f,g},
/// e^{2 lambda} = 1/4 (1+|g|^2)^2 |S|^2 / |g'|^2, K = -16 |g'|^4 / ((1+|g|^2)^4 |S|^2).
inline IntrinsicSample bryant_intrinsic_sample(const Jet& f, const Jet& g) {
  const Complex S = schwarzian_value(f, g);
  const double op = 1.0 + std::norm(g.value());
  const double d2 = std::norm(g.derivative_value(1));
  IntrinsicSample s;
  s.z = g.center();
  s.sigma = -S;
  s.e2l = 0.25 * op * op * std::norm(S) / d2;
  s.K = -16.0 * d2 * d2 / (op * op * op * op * std::norm(S));
  return s;
}

// ---- Euclidean immersion ------------------------------------------------------------------

/// Symbolic dz-coefficients of the immersion integrand, phase included.
inline std::array<Expr, 3> immersion_exprs(const SurfaceFields& F) {
  const Expr& g = F.need_g();
  const Expr eta = Expr::constant(F.phase) * F.need_eta();
  const Expr one = Expr::constant(1.0);
  return {Expr::constant(0.5) * (one - g * g) * eta, Expr::constant(0.5 * kI) * (one + g * g) * eta, g * eta};
}

/// Nearest finite singular candidate to the segment [a, b], as a distance.
inline double segment_clearance(const std::vector<Complex>& pts, Complex a, Complex b) {
  double best = INFINITY;
  const Complex d = b - a;
  for (const auto& p : pts) {
    double t = std::norm(d) > 0 ? ((p - a) * std::conj(d)).real() / std::norm(d) : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::abs(a + t * d - p));
  }
  return best;
}

/// x(z) - x(z0) = Re of the path integral of Phi along z0 -> waypoints -> z.
inline std::array<double, 3> minimal_immersion(const SurfaceSpec& s, Complex z0, Complex z,
                                               const std::vector<Complex>& waypoints = {}, double tol = 1e-10) {
  const SurfaceFields F = make_fields(s);
  if (F.kind != SurfaceFields::Kind::Weierstrass) throw Unsupported("minimal_immersion needs Weierstrass data");
  std::vector<Complex> path{z0};
  path.insert(path.end(), waypoints.begin(), waypoints.end());
  path.push_back(z);
  std::vector<Complex> pts;
  for (const Expr& e : {*F.g, *F.eta})
    for (const auto& c : pole_candidates(e)) pts.push_back(c);
  for (const auto& p : s.punctures)
    if (!p.is_infinite()) pts.push_back(p.z);
  for (std::size_t i = 1; i < path.size(); ++i)
    if (segment_clearance(pts, path[i - 1], path[i]) < 1e-8)
      throw PathThroughSingularity("segment " + format_complex(path[i - 1]) + " -> " + format_complex(path[i]));
  std::array<double, 3> x{};
  for (int k = 0; k < 3; ++k) {
    auto f = [&](Complex w) { return immersion_integrands(F, w)[k]; };
    x[k] = integrate_path(f, path, tol).real();
  }
  return x;
}

// ---- Lawson correspondence ---------------------------------------------------------------

/// Minimal (g, eta) -> Bryant surface with the same metric and Hopf differential; the hyperbolic
/// Gauss map is developed from `base` by the null-lift ODE.
inline SurfaceSpec lawson_min_to_bryant(const SurfaceSpec& s, Complex base) {
  const auto* w = std::get_if<WeierstrassData>(&s.data);
  if (!w) throw Unsupported("lawson_min_to_bryant needs Weierstrass data");
  SurfaceSpec r = s;
  r.name = s.name + "_bryant";
  r.data = BryantDevelopedData{w->g, w->eta, base};
  return r;
}

/// Bryant (f, g) or (g, sigma) -> minimal data (g, eta = -S{f,g} / g').
inline SurfaceSpec lawson_bryant_to_min(const SurfaceSpec& s) {
  const SurfaceFields F = make_fields(s);
  if (!F.is_bryant()) throw Unsupported("lawson_bryant_to_min needs Bryant data");
  if (is_constant_function(*F.g)) throw DegenerateData("constant secondary Gauss map (horosphere): flat plane");
  if (is_zero_function(*F.sigma)) throw DegenerateData("sigma vanishes identically: totally umbilic");
  SurfaceSpec r = s;
  if (r.name.size() > 7 && r.name.substr(r.name.size() - 7) == "_bryant") r.name.resize(r.name.size() - 7);
  else r.name += "_minimal";
  r.data = WeierstrassData{*F.g, *F.eta};
  return r;
}

/// Intrinsic sample of a developed Bryant surface computed through its hyperbolic Gauss map
/// (f from the lift at z, then sigma = -S{f,g}); `F_at_z` is the lift value at z.
inline IntrinsicSample developed_intrinsic_sample(const SurfaceFields& F, const Mat2& F_at_z, Complex z) {
  const Jet g = eval_jet(F.need_g(), z, 4);
  const Jet eta = Complex(F.phase) * eval_jet(F.need_eta(), z, 4);
  const Jet f = developed_f_jet(F_at_z, g, eta, 4);
  return bryant_intrinsic_sample(f, g);
}

// ---- harmonic 1-forms and the Ros identity ----------------------------------------------

/// The real harmonic 1-form Re(zeta dz).
struct HarmonicForm {
  Expr zeta;
};

inline HarmonicForm dx_form(const SurfaceFields& F, int k) { return {immersion_exprs(F)[k]}; }

/// Hodge star: *Re(zeta dz) = Re(-i zeta dz).
inline HarmonicForm star(const HarmonicForm& w) { return {Expr::constant(-kI) * w.zeta}; }

/// X_w = (<w, dx_1>, <w, dx_2>, <w, dx_3>) = e^{-2 lambda} Re(conj(zeta) Phi).
inline std::array<double, 3> ros_field(const SurfaceFields& F, const HarmonicForm& w, Complex z) {
  const auto phi = immersion_integrands(F, z);
  const Complex c = std::conj(w.zeta.eval(z));
  const double inv = 1.0 / metric_factor(F, z);
  return {inv * (c * phi[0]).real(), inv * (c * phi[1]).real(), inv * (c * phi[2]).real()};
}

/// Left side Delta X_w - 2 K X_w with the five-point Laplacian of step h.
inline std::array<double, 3> ros_lhs(const SurfaceFields& F, const HarmonicForm& w, Complex z, double h) {
  const auto c = ros_field(F, w, z);
  const auto e = ros_field(F, w, z + h), W = ros_field(F, w, z - h);
  const auto n = ros_field(F, w, z + Complex(0, h)), s = ros_field(F, w, z - Complex(0, h));
  const double e2l = metric_factor(F, z), K = gauss_curvature(F, z);
  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k) out[k] = (e[k] + W[k] + n[k] + s[k] - 4 * c[k]) / (h * h * e2l) - 2.0 * K * c[k];
  return out;
}

/// <grad w, Re(sigma)>: with grad(zeta dz) = (zeta' - 2 lambda_z zeta) dz^2 and
/// <Re(A dz^2), Re(B dz^2)> = 2 e^{-4 lambda} Re(A conj B).
inline double ros_pairing(const SurfaceFields& F, const HarmonicForm& w, Complex z) {
  const Jet zeta = eval_jet(w.zeta, z, 1);
  const Jet g = eval_jet(F.need_g(), z, 1);
  const Jet eta = eval_jet(F.need_eta(), z, 1);
  const Complex lz2 = 2.0 * std::conj(g[0]) * g[1] / (1.0 + std::norm(g[0])) + eta[1] / eta[0];
  const Complex A = zeta[1] - lz2 * zeta[0];
  const double e2l = metric_factor(F, z);
  return 2.0 * (A * std::conj(hopf_value(F, z))).real() / (e2l * e2l);
}

/// Right side 2 <grad w, Re(sigma)> nu, where nu = -N is the normal for which Re(sigma dz^2)
/// is the second fundamental form.
inline std::array<double, 3> ros_rhs(const SurfaceFields& F, const HarmonicForm& w, Complex z) {
  const double p = 2.0 * ros_pairing(F, w, z);
  const auto N = unit_normal(F, z);
  return {-p * N[0], -p * N[1], -p * N[2]};
}

inline std::array<double, 3> ros_identity_residual(const SurfaceFields& F, const HarmonicForm& w, Complex z, double h) {
  const auto l = ros_lhs(F, w, z, h);
  const auto r = ros_rhs(F, w, z);
  return {l[0] - r[0], l[1] - r[1], l[2] - r[2]};
}

// ---- cone angles -------------------------------------------------------------------------

/// Total angle at p: length of the metric circle of chart radius r divided by its metric
/// distance to p along a ray; tends to 2 pi (m + 1) at a branch point of order m.
inline double cone_angle(const SurfaceFields& F, Complex p, double r, int nodes = 256) {
  double len = 0.0;
  for (int k = 0; k < nodes; ++k) len += std::sqrt(metric_factor(F, p + std::polar(r, 2 * kPi * (k + 0.5) / nodes)));
  len *= 2 * kPi * r / nodes;
  double dist = 0.0;
  const int radial = 400;
  for (int k = 0; k < radial; ++k) {
    // nodes graded toward p
    const double t0 = r * std::pow(static_cast<double>(k) / radial, 2), t1 = r * std::pow(static_cast<double>(k + 1) / radial, 2);
    dist += std::sqrt(metric_factor(F, p + 0.5 * (t0 + t1) * std::polar(1.0, 0.3))) * (t1 - t0);
  }
  return len / dist;
}

}  // namespace framed
