#pragma once

// The null holomorphic lift into PSL2C: the omega(f, g) matrix, the ODE dF = F Omega dz
// with Omega = 1/2 [[g, -g^2], [1, -g]] eta dz, and the projection to hyperbolic space.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "framed/monodromy.hpp"
#include "framed/moebius.hpp"
#include "framed/schwarzian.hpp"
#include "framed/surface.hpp"

namespace framed {

// ---- omega(f, g) -----------------------------------------------------------------

struct OmegaParts {
  Complex fp, fpp;  // df/dg, d^2f/dg^2
  Complex root;     // (df/dg)^{1/2}, principal branch unless aligned by the caller
};

inline OmegaParts omega_parts(const Jet& f, const Jet& g) {
  const Complex g1 = g.derivative_value(1), g2 = g.derivative_value(2);
  const Complex f1 = f.derivative_value(1), f2 = f.derivative_value(2);
  if (std::abs(g1) < 1e-14 || std::abs(f1) < 1e-14) throw CriticalPoint("critical point of f or g");
  OmegaParts p;
  p.fp = f1 / g1;
  p.fpp = (f2 * g1 - f1 * g2) / (g1 * g1 * g1);
  p.root = std::sqrt(p.fp);
  return p;
}

/// omega(f, g) with a given square root of df/dg.
inline Mat2 omega_from_parts(Complex f, Complex g, const OmegaParts& p) {
  const Complex r = p.root, r3 = 1.0 / (r * r * r), ir = 1.0 / r;
  const Complex alpha = r - 0.5 * f * r3 * p.fpp;
  const Complex beta = f * (ir + 0.5 * g * r3 * p.fpp) - g * r;
  const Complex gamma = -0.5 * r3 * p.fpp;
  const Complex delta = ir + 0.5 * g * r3 * p.fpp;
  return {alpha, beta, gamma, delta};
}

inline Mat2 omega_matrix(const Jet& f, const Jet& g) { return omega_from_parts(f.value(), g.value(), omega_parts(f, g)); }

inline Mat2 omega_matrix(const Expr& f, const Expr& g, Complex z) { return omega_matrix(eval_jet(f, z, 3), eval_jet(g, z, 3)); }

/// Sign of a PSL2C representative chosen closest to `ref`.
inline Mat2 align_sign(const Mat2& m, const Mat2& ref) {
  const Mat2 neg = Complex(-1.0) * m;
  return (m - ref).max_abs() <= (neg - ref).max_abs() ? m : neg;
}

/// The closed form for d omega / dz: -1/2 [[f, -f g], [1, -g]] (df/dg)^{-1/2} S{f,g} / g'.
inline Mat2 domega_formula(const Jet& f, const Jet& g, Complex root) {
  const Complex S = schwarzian_value(f, g);
  const Complex fv = f.value(), gv = g.value();
  const Complex s = -0.5 * S / (root * g.derivative_value(1));
  return s * Mat2{fv, -fv * gv, 1.0, -gv};
}

/// Omega (dz coefficient) for secondary Gauss map value g and Weierstrass form value eta.
inline Mat2 omega_form(Complex g, Complex eta) { return (0.5 * eta) * Mat2{g, -g * g, 1.0, -g}; }

// ---- hyperbolic positions ----------------------------------------------------------

struct HyperbolicPosition {
  Mat2 hermitian;             // F F^*, det 1
  std::array<double, 4> hyperboloid{};  // (x0, x1, x2, x3), x0^2 - |x|^2 = 1
  std::array<double, 3> ball{};         // Poincare ball
};

inline HyperbolicPosition bryant_position(const Mat2& F) {
  const Mat2 U = F.unimodular();
  HyperbolicPosition p;
  p.hermitian = U * U.conj_transpose();
  const double x0 = 0.5 * (p.hermitian.a.real() + p.hermitian.d.real());
  const double x3 = 0.5 * (p.hermitian.a.real() - p.hermitian.d.real());
  const double x1 = p.hermitian.b.real(), x2 = p.hermitian.b.imag();
  p.hyperboloid = {x0, x1, x2, x3};
  p.ball = {x1 / (1.0 + x0), x2 / (1.0 + x0), x3 / (1.0 + x0)};
  return p;
}

// ---- developing the lift -------------------------------------------------------------

/// Taylor coefficients E_k of F(z0 + t) = F(z0) E(t), E' = E Omega, E(0) = I.
inline std::vector<Mat2> lift_taylor(const Jet& g, const Jet& eta, std::size_t order) {
  const std::size_t n = order + 1;
  // Omega_k Taylor coefficients
  const Jet g2 = g * g;
  std::vector<Mat2> om(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex eg{}, eg2{}, e = eta[k];
    for (std::size_t i = 0; i <= k; ++i) {
      eg += eta[i] * g[k - i];
      eg2 += eta[i] * g2[k - i];
    }
    om[k] = Mat2{0.5 * eg, -0.5 * eg2, 0.5 * e, -0.5 * eg};
  }
  std::vector<Mat2> E(n + 1, Mat2{0.0, 0.0, 0.0, 0.0});
  E[0] = Mat2::identity();
  for (std::size_t k = 0; k < n; ++k) {
    Mat2 s{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i <= k; ++i) s = s + E[i] * om[k - i];
    E[k + 1] = (1.0 / static_cast<double>(k + 1)) * s;
  }
  return E;
}

inline Mat2 eval_taylor(const std::vector<Mat2>& E, Complex t) {
  Mat2 s{0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = E.size(); k-- > 0;) s = t * s + E[k];
  return s;
}

/// Hyperbolic Gauss map of a lift F = [[A, B], [C, D]] at a point with secondary Gauss
/// map value g: dA/dC = (g A + B)/(g C + D).
inline Complex hyperbolic_gauss_map(const Mat2& F, Complex g) { return (g * F.a + F.b) / (g * F.c + F.d); }

/// Jet of the hyperbolic Gauss map at z0 from F(z0) and jets of g, eta.
inline Jet developed_f_jet(const Mat2& F0, const Jet& g, const Jet& eta, std::size_t order) {
  const auto E = lift_taylor(g, eta, order);
  std::vector<Complex> A(order + 1), B(order + 1), C(order + 1), D(order + 1);
  for (std::size_t k = 0; k <= order; ++k) {
    const Mat2 Fk = F0 * E[k];
    A[k] = Fk.a;
    B[k] = Fk.b;
    C[k] = Fk.c;
    D[k] = Fk.d;
  }
  const Complex z0 = g.center();
  const Jet a(z0, A), b(z0, B), c(z0, C), d(z0, D);
  return (g * a + b) / (g * c + d);
}

/// Solution of dF = F Omega dz along polylines, starting from F(base) = F0.
class NullLift {
 public:
  NullLift(const SurfaceFields& F, Complex base, Mat2 F0 = Mat2::identity(), double tol = 1e-13)
      : fields_(F), base_(base), F0_(F0), tol_(tol) {
    fields_.need_g();
    fields_.need_eta();
  }

  Complex base() const { return base_; }

  /// F at the end of the polyline base -> waypoints... -> z.
  Mat2 at(Complex z, const std::vector<Complex>& waypoints = {}) const {
    std::vector<Complex> path{base_};
    path.insert(path.end(), waypoints.begin(), waypoints.end());
    path.push_back(z);
    Continuation C({*fields_.g, *fields_.eta}, base_);
    Mat2 M = F0_;
    for (std::size_t i = 1; i < path.size(); ++i) M = segment(M, C, path[i - 1], path[i]);
    return M;
  }

 private:
  SurfaceFields fields_;
  Complex base_;
  Mat2 F0_;
  double tol_;

  using State = std::array<double, 8>;

  static State pack(const Mat2& M) {
    return {M.a.real(), M.a.imag(), M.b.real(), M.b.imag(), M.c.real(), M.c.imag(), M.d.real(), M.d.imag()};
  }
  static Mat2 unpack(const State& s) { return {{s[0], s[1]}, {s[2], s[3]}, {s[4], s[5]}, {s[6], s[7]}}; }

  Mat2 segment(const Mat2& start, Continuation& C, Complex a, Complex b) const {
    namespace ode = boost::numeric::odeint;
    const Complex dz = b - a;
    const Complex phase = fields_.phase;
    auto rhs = [&](const State& x, State& dxdt, double t) {
      C.move_to(a + t * dz);
      const Mat2 Om = omega_form(C.value(0), phase * C.value(1));
      dxdt = pack(dz * (unpack(x) * Om));
    };
    State x = pack(start);
    auto stepper = ode::make_controlled(tol_, tol_, ode::runge_kutta_fehlberg78<State>());
    ode::integrate_adaptive(stepper, rhs, x, 0.0, 1.0, 1e-3);
    C.move_to(b);
    return unpack(x);
  }
};

// ---- residual checks ---------------------------------------------------------------

/// |det(F^{-1} F'(z))| with F' by central differences along two directions; exact lifts give 0.
template <class FOfZ>
double null_residual(const FOfZ& lift, Complex z, double h) {
  double worst = 0.0;
  const Mat2 Finv = lift(z).inverse(0.0);
  for (Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
    const Mat2 dF = (1.0 / (2.0 * h * dir)) * (lift(z + h * dir) - lift(z - h * dir));
    const Mat2 L = Finv * dF;
    worst = std::max(worst, std::abs(L.det()) / std::max(1e-300, L.max_abs() * L.max_abs()));
  }
  return worst;
}

/// Sign-aligned omega(f, g) near z for finite differencing.
inline Mat2 omega_near(const Expr& f, const Expr& g, Complex z, const Mat2& ref) {
  return align_sign(omega_matrix(f, g, z), ref);
}

}  // namespace framed
