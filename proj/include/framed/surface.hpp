#pragma once

// Surface descriptions and pointwise intrinsic data.
//
// Conventions: the metric is e^{2 lambda} |dz|^2 with
//   e^{2 lambda} = 1/4 (1 + |g|^2)^2 |eta|^2,
// the Hopf differential is sigma = eta dg = -S{f, g}, and the immersion is
//   x = Re int (1/2 (1 - g^2), i/2 (1 + g^2), g) eta.
// The associated-family phase multiplies sigma and eta only where they enter
// extrinsic quantities; intrinsic values never touch it.

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "framed/expr.hpp"
#include "framed/expr_jet.hpp"
#include "framed/schwarzian.hpp"

namespace framed {

enum class Sidedness { TwoSided, OneSided };

/// Minimal surface data (g, eta dz).
struct WeierstrassData {
  Expr g, eta;
};
/// Bryant surface given by the hyperbolic and secondary Gauss maps (f, g).
struct BryantData {
  Expr f, g;
};
/// Bryant surface given by g and sigma = eta dg; f is developed numerically from base.
struct BryantDevelopedData {
  Expr g, eta;
  Complex base{};
};
/// Flat totally umbilic data: e^{2 lambda} = |h|^2, sigma = 0 (horosphere, flat tori).
struct IntrinsicData {
  Expr h, sigma;
};
/// Only a Gauss map is known (framedness questions only).
struct GaussMapData {
  Expr g;
};

using SurfaceData = std::variant<WeierstrassData, BryantData, BryantDevelopedData, IntrinsicData, GaussMapData>;

struct SurfaceSpec {
  std::string name;
  bool torus = false;
  Complex period1{1.0, 0.0};
  Complex period2{0.0, 1.0};
  std::vector<SpherePoint> punctures;  // empty for tori
  SurfaceData data;
  Complex phase{1.0, 0.0};  // associated family e^{i theta}
  Sidedness sidedness = Sidedness::TwoSided;

  int genus() const { return torus ? 1 : 0; }
};

inline std::string data_kind(const SurfaceSpec& s) {
  switch (s.data.index()) {
    case 0: return "weierstrass";
    case 1: return "bryant";
    case 2: return "bryant_sigma";
    case 3: return "intrinsic";
    default: return "gauss_map";
  }
}

/// Derived expressions, built once per surface.
struct SurfaceFields {
  enum class Kind { Weierstrass, BryantExplicit, BryantDeveloped, Intrinsic, GaussMapOnly };
  Kind kind = Kind::Weierstrass;
  std::optional<Expr> g, ghat, eta, sigma, f, h;
  Complex phase{1.0};

  bool has_gauss_map() const { return g.has_value(); }
  bool has_metric() const { return kind != Kind::GaussMapOnly; }
  bool is_bryant() const { return kind == Kind::BryantExplicit || kind == Kind::BryantDeveloped; }

  const Expr& need_g() const {
    if (!g) throw Unsupported("surface has no Gauss map");
    return *g;
  }
  const Expr& need_eta() const {
    if (!eta) throw Unsupported("surface has no Weierstrass form");
    return *eta;
  }
  const Expr& need_sigma() const {
    if (!sigma) throw Unsupported("surface has no Hopf differential");
    return *sigma;
  }
};

inline SurfaceFields make_fields(const SurfaceSpec& s) {
  SurfaceFields F;
  F.phase = s.phase;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, WeierstrassData>) {
          F.kind = SurfaceFields::Kind::Weierstrass;
          F.g = d.g;
          F.eta = d.eta;
          F.sigma = d.eta * differentiate(d.g);
        } else if constexpr (std::is_same_v<T, BryantDevelopedData>) {
          F.kind = SurfaceFields::Kind::BryantDeveloped;
          F.g = d.g;
          F.eta = d.eta;
          F.sigma = d.eta * differentiate(d.g);
        } else if constexpr (std::is_same_v<T, BryantData>) {
          F.kind = SurfaceFields::Kind::BryantExplicit;
          F.g = d.g;
          F.f = d.f;
          F.sigma = -schwarzian(d.f, d.g).coeff;
          F.eta = *F.sigma / differentiate(d.g);
        } else if constexpr (std::is_same_v<T, IntrinsicData>) {
          F.kind = SurfaceFields::Kind::Intrinsic;
          F.h = d.h;
          F.sigma = d.sigma;
        } else {
          F.kind = SurfaceFields::Kind::GaussMapOnly;
          F.g = d.g;
        }
      },
      s.data);
  if (F.g) F.ghat = Expr::constant(1.0) / *F.g;
  return F;
}

// ---- pointwise intrinsic data --------------------------------------------------

struct GaussSample {
  Complex g;     // may be huge near a pole; use `inverted` then
  Complex ghat;  // 1/g when inverted
  bool inverted = false;
  double spherical_derivative = 0.0;  // |g'| / (1 + |g|^2), chart-invariant under g -> 1/g
  double one_plus = 1.0;              // 1 + |g|^2 (or 1 + |ghat|^2 when inverted)
};

inline GaussSample gauss_sample(const SurfaceFields& F, Complex z) {
  GaussSample s;
  const Expr& g = F.need_g();
  try {
    const Jet j = eval_jet(g, z, 1);
    if (std::abs(j[0]) <= 1.0) {
      s.g = j[0];
      s.one_plus = 1.0 + std::norm(j[0]);
      s.spherical_derivative = std::abs(j[1]) / s.one_plus;
      return s;
    }
  } catch (const SingularPoint&) {
  }
  const Jet jh = eval_jet(*F.ghat, z, 1);
  s.inverted = true;
  s.ghat = jh[0];
  s.g = jh[0] == Complex{} ? Complex(INFINITY, 0.0) : 1.0 / jh[0];
  s.one_plus = 1.0 + std::norm(jh[0]);
  s.spherical_derivative = std::abs(jh[1]) / s.one_plus;
  return s;
}

/// e^{2 lambda} at z (chart z).
inline double metric_factor(const SurfaceFields& F, Complex z) {
  switch (F.kind) {
    case SurfaceFields::Kind::Intrinsic: return std::norm(F.h->eval(z));
    case SurfaceFields::Kind::GaussMapOnly: throw Unsupported("no metric for Gauss-map-only data");
    case SurfaceFields::Kind::BryantExplicit: {
      // 1/4 (1+|g|^2)^2 |S{f,g}|^2 |dg|^-2
      const Jet jg = eval_jet(*F.g, z, 3);
      const Complex s = schwarzian_value(eval_jet(*F.f, z, 3), jg);
      const double op = 1.0 + std::norm(jg[0]);
      return 0.25 * op * op * std::norm(s) / std::norm(jg[1]);
    }
    default: {
      const GaussSample gs = gauss_sample(F, z);
      const Complex eta = F.eta->eval(z);
      if (!gs.inverted) return 0.25 * gs.one_plus * gs.one_plus * std::norm(eta);
      // (1 + |g|^2)^2 |eta|^2 = (1 + |ghat|^2)^2 |eta / ghat^2|^2
      const double a = std::norm(eta) / std::norm(gs.ghat * gs.ghat);
      return 0.25 * gs.one_plus * gs.one_plus * a;
    }
  }
}

/// Gauss curvature K = -|sigma|^2 e^{-4 lambda}.
inline double gauss_curvature(const SurfaceFields& F, Complex z) {
  switch (F.kind) {
    case SurfaceFields::Kind::Intrinsic: return 0.0;
    case SurfaceFields::Kind::GaussMapOnly: throw Unsupported("no metric for Gauss-map-only data");
    case SurfaceFields::Kind::BryantExplicit: {
      // -16 |dg|^4 / ((1+|g|^2)^4 |S{f,g}|^2)
      const Jet jg = eval_jet(*F.g, z, 3);
      const Complex s = schwarzian_value(eval_jet(*F.f, z, 3), jg);
      const double op = 1.0 + std::norm(jg[0]);
      const double d2 = std::norm(jg[1]);
      return -16.0 * d2 * d2 / (op * op * op * op * std::norm(s));
    }
    default: {
      const GaussSample gs = gauss_sample(F, z);
      return -4.0 * gs.spherical_derivative * gs.spherical_derivative / metric_factor(F, z);
    }
  }
}

/// Jacobi potential 2 K e^{2 lambda} = -8 |g'|^2 / (1 + |g|^2)^2, computed from g alone
/// so it is identical across the associated family, eta scaling and the Lawson correspondence.
inline double jacobi_potential(const SurfaceFields& F, Complex z) {
  if (F.kind == SurfaceFields::Kind::Intrinsic) return 0.0;
  const GaussSample gs = gauss_sample(F, z);
  return -8.0 * gs.spherical_derivative * gs.spherical_derivative;
}

/// sigma (dz^2 coefficient) including the associated-family phase.
inline Complex hopf_value(const SurfaceFields& F, Complex z) { return F.phase * F.need_sigma().eval(z); }

/// Immersion integrands Phi_k (dz coefficients), phase included.
inline std::array<Complex, 3> immersion_integrands(const SurfaceFields& F, Complex z) {
  const Complex eta = F.phase * F.need_eta().eval(z);
  const Complex g = F.need_g().eval(z);
  return {0.5 * (1.0 - g * g) * eta, 0.5 * kI * (1.0 + g * g) * eta, g * eta};
}

/// Real 1-form values (w(d/dx), w(d/dy)) of w_k = Re(Phi_k dz) = dx_k.
inline std::array<std::array<double, 2>, 3> harmonic_forms(const SurfaceFields& F, Complex z) {
  const auto phi = immersion_integrands(F, z);
  std::array<std::array<double, 2>, 3> w{};
  for (int k = 0; k < 3; ++k) w[k] = {phi[k].real(), -phi[k].imag()};
  return w;
}

/// Unit normal N = (2 Re g, 2 Im g, |g|^2 - 1) / (1 + |g|^2).
inline std::array<double, 3> unit_normal(const SurfaceFields& F, Complex z) {
  const GaussSample gs = gauss_sample(F, z);
  if (!gs.inverted) {
    const double op = gs.one_plus;
    return {2.0 * gs.g.real() / op, 2.0 * gs.g.imag() / op, (std::norm(gs.g) - 1.0) / op};
  }
  // in terms of ghat = 1/g: (2 Re conj(ghat), 2 Im conj(ghat), 1 - |ghat|^2) / (1 + |ghat|^2)
  const Complex c = std::conj(gs.ghat);
  const double op = gs.one_plus;
  return {2.0 * c.real() / op, 2.0 * c.imag() / op, (1.0 - std::norm(gs.ghat)) / op};
}

/// Total curvature over the whole parameter sphere (genus 0), integrating K e^{2 lambda}
/// in the polar angle of the sphere, where the integrand is smooth for regular ends.
inline double total_curvature(const SurfaceFields& F, int angular_nodes = 256) {
  if (F.kind == SurfaceFields::Kind::Intrinsic) return 0.0;
  auto ring = [&](double phi) {
    const double r = std::tan(0.5 * phi);
    const double drdphi = 0.5 / std::pow(std::cos(0.5 * phi), 2);
    double acc = 0.0;
    for (int k = 0; k < angular_nodes; ++k) {
      const double th = 2.0 * kPi * (k + 0.5) / angular_nodes;
      acc += 0.5 * jacobi_potential(F, std::polar(r, th));
    }
    return acc * (2.0 * kPi / angular_nodes) * r * drdphi;
  };
  using GL = boost::math::quadrature::gauss<double, 150>;
  return GL::integrate(ring, 0.0, 0.5 * kPi) + GL::integrate(ring, 0.5 * kPi, kPi);
}

/// Associated-family member: sigma -> e^{i theta} sigma. Intrinsic data untouched.
inline SurfaceSpec associated_family(const SurfaceSpec& s, double theta) {
  SurfaceSpec r = s;
  r.phase = s.phase * std::exp(Complex(0.0, theta));
  return r;
}

}  // namespace framed
