#include <gtest/gtest.h>

#include <random>

#include "framed/representations.hpp"
#include "framed/scene.hpp"

using namespace framed;

namespace {
SurfaceSpec builtin(const std::string& name, const Parameters& p = {}) { return build_surface(builtin_scene(name, p)); }

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
double rel(const Mat2& a, const Mat2& b) { return (a - b).max_abs() / std::max(1.0, b.max_abs()); }

Mat2 cousin_F(double mu, Complex z) {
  const double s = 1.0 / std::sqrt(2 * mu + 1);
  return Mat2{s * (mu + 1) * std::pow(z, mu), s * mu * std::pow(z, -(mu + 1)), s * mu * std::pow(z, mu + 1),
              s * (mu + 1) * std::pow(z, -mu)};
}

Mat2 cousin_closed_form(double mu, Complex z) {
  const double c = mu * (mu + 1) / (2 * mu + 1);
  return c * Mat2{1.0 / z, -std::pow(z, -2 * mu - 2), std::pow(z, 2 * mu), -1.0 / z};
}

Mat2 fd_log_derivative(const std::function<Mat2(Complex)>& F, Complex z, double h) {
  const Mat2 c = F(z);
  const Mat2 dF = (1.0 / (2.0 * h)) * (align_sign(F(z + h), c) - align_sign(F(z - h), c));
  return c.inverse(0.0) * dF;
}

double observed_order(double e1, double e2) { return std::log2(e1 / e2); }
}  // namespace

TEST(Omega, IdentityAndUnimodular) {
  const Expr z = Expr::var();
  const Mat2 I = omega_matrix(z, z, Complex(0.3, 0.7));
  EXPECT_LT(rel(align_sign(I, Mat2::identity()), Mat2::identity()), 1e-14);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    const Expr f = parse_expr("(z^3 + 2*z - i)/(z^2 + 3)");
    const Expr g = parse_expr("(2*z + 1)/(z - 4) + z^2/5");
    const Complex p(u(rng), u(rng));
    EXPECT_NEAR(std::abs(omega_matrix(f, g, p).det() - 1.0), 0.0, 1e-11);
  }
}

TEST(Omega, ConstantForMoebiusRelatedMaps) {
  const Expr g = parse_expr("z^2 + z/3");
  const Expr f = (Expr::constant(2.0) * g + Expr::constant(Complex(0, 1))) / (g - Expr::constant(5.0));
  const Mat2 a = omega_matrix(f, g, Complex(0.2, 0.1));
  for (Complex z : {Complex(-0.7, 0.4), Complex(1.1, -0.3)}) EXPECT_LT(rel(align_sign(omega_matrix(f, g, z), a), a), 1e-12);
}

TEST(Omega, DerivativeMatchesClosedForms) {
  const Expr f = parse_expr("(z^3 + 2*z - i)/(z^2 + 3)");
  const Expr g = parse_expr("(2*z + 1)/(z - 4) + z^2/5");
  for (Complex z : {Complex(0.3, 0.2), Complex(-0.8, 0.5), Complex(1.4, -0.6)}) {
    const Jet fj = eval_jet(f, z, 3), gj = eval_jet(g, z, 3);
    const OmegaParts parts = omega_parts(fj, gj);
    const Mat2 w = omega_from_parts(fj.value(), gj.value(), parts);
    auto W = [&](Complex x) { return align_sign(omega_matrix(f, g, x), w); };
    std::array<double, 3> err{};
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-2 / std::pow(2.0, i);
      const Mat2 dw = (1.0 / (2 * h)) * (W(z + h) - W(z - h));
      err[i] = rel(dw, domega_formula(fj, gj, parts.root));
    }
    EXPECT_LT(err[2], 1e-4);
    EXPECT_GT(observed_order(err[1], err[2]), 1.9);
    // omega^{-1} d omega = -1/2 [[g, -g^2], [1, -g]] S / g'
    const Complex S = schwarzian_value(fj, gj);
    const Complex gv = gj.value();
    const Mat2 expect = (-0.5 * S / gj.derivative_value(1)) * Mat2{gv, -gv * gv, 1.0, -gv};
    EXPECT_LT(rel(w.inverse(0.0) * domega_formula(fj, gj, parts.root), expect), 1e-12);
  }
}

TEST(Cousin, LogDerivativeMatchesClosedForm) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> r(0.4, 2.0), a(-2.5, 2.5);
  for (double mu : {0.5, 1.0, 1.5}) {
    const auto s = builtin("cousin", {{"mu", mu}});
    const auto* d = std::get_if<BryantData>(&s.data);
    ASSERT_NE(d, nullptr);
    for (int t = 0; t < 20; ++t) {
      const Complex z = std::polar(r(rng), a(rng));
      const Mat2 expect = cousin_closed_form(mu, z);
      EXPECT_LT(rel(fd_log_derivative([&](Complex x) { return cousin_F(mu, x); }, z, 1e-4), expect), 1e-6);
      EXPECT_LT(rel(fd_log_derivative([&](Complex x) { return omega_matrix(d->f, d->g, x); }, z, 1e-4), expect), 1e-6);
      // the lift ODE uses exactly this form
      const auto F = make_fields(s);
      EXPECT_LT(rel(omega_form(F.g->eval(z), F.eta->eval(z)), expect), 1e-12);
    }
  }
}

TEST(NullLift, OdeMatchesExplicitOmega) {
  const auto s = builtin("cousin", {{"mu", 1.0}});
  const auto F = make_fields(s);
  const auto* d = std::get_if<BryantData>(&s.data);
  const Complex base(1.0, 0.0);
  const NullLift lift(F, base, omega_matrix(d->f, d->g, base));
  for (Complex z : {Complex(1.5, 0.5), Complex(0.6, -0.8), Complex(-1.0, 0.2)}) {
    const std::vector<Complex> via = z.real() < 0 ? std::vector<Complex>{Complex(0, 1.2)} : std::vector<Complex>{};
    const Mat2 ode = lift.at(z, via);
    EXPECT_LT(rel(align_sign(omega_matrix(d->f, d->g, z), ode), ode), 1e-9) << z;
  }
}

TEST(NullLift, ResidualConvergesAtSecondOrder) {
  auto check = [](const std::function<Mat2(Complex)>& lift, Complex z) {
    const double e1 = null_residual(lift, z, 1e-2), e2 = null_residual(lift, z, 5e-3), e3 = null_residual(lift, z, 2.5e-3);
    EXPECT_GT(observed_order(e1, e2), 1.9);
    EXPECT_GT(observed_order(e2, e3), 1.9);
  };
  const auto cs = builtin("cousin", {{"mu", 1.0}});
  const auto* d = std::get_if<BryantData>(&cs.data);
  const Complex z0(0.8, 0.3);
  const Mat2 ref = omega_matrix(d->f, d->g, z0);
  check([&](Complex x) { return omega_near(d->f, d->g, x, ref); }, z0);
  for (const char* name : {"catenoid", "enneper", "scherk"}) {
    const auto F = make_fields(lawson_min_to_bryant(builtin(name), Complex(0.4, 0.2)));
    const Complex z(0.5, 0.35);
    const Mat2 Fz = NullLift(F, Complex(0.4, 0.2)).at(z);
    const auto E = lift_taylor(eval_jet(*F.g, z, 30), eval_jet(*F.eta, z, 30), 30);
    check([&](Complex x) { return Fz * eval_taylor(E, x - z); }, z);
  }
}

TEST(Hyperbolic, Positions) {
  const auto o = bryant_position(Mat2::identity());
  for (double b : o.ball) EXPECT_EQ(b, 0.0);
  const Complex z(0.7, -0.4);
  const auto h = bryant_position(Mat2{1.0, z, 0.0, 1.0});
  EXPECT_LT(rel(h.hermitian, Mat2{1.0 + std::norm(z), z, std::conj(z), 1.0}), 1e-15);
  const double x0 = h.hyperboloid[0];
  EXPECT_NEAR(x0 * x0 - h.hyperboloid[1] * h.hyperboloid[1] - h.hyperboloid[2] * h.hyperboloid[2] -
                  h.hyperboloid[3] * h.hyperboloid[3],
              1.0, 1e-12);
  // catenoid cousin: rotation z -> e^{i t} z is an ambient rotation about the x3 axis
  for (double mu : {0.5, 1.0}) {
    for (double t : {0.4, 1.9}) {
      const Complex w(1.3, 0.4);
      const auto a = bryant_position(cousin_F(mu, w)), b = bryant_position(cousin_F(mu, std::polar(1.0, t) * w));
      EXPECT_NEAR(std::hypot(a.ball[0], a.ball[1]), std::hypot(b.ball[0], b.ball[1]), 1e-9);
      EXPECT_NEAR(a.ball[2], b.ball[2], 1e-9);
      double norm = 0;
      for (double x : b.ball) norm += x * x;
      EXPECT_LT(norm, 1.0);
    }
  }
}

TEST(Metric, Examples) {
  const auto cat = make_fields(builtin("catenoid"));
  for (double th : {0.0, 1.0, 2.5}) EXPECT_NEAR(metric_factor(cat, std::polar(1.0, th)), 1.0, 1e-14);
  EXPECT_EQ(gauss_curvature(make_fields(builtin("plane")), Complex(0.3, 0.3)), 0.0);
  // Bryant formula vs the Weierstrass formula of the corresponding minimal data
  const auto cs = builtin("cousin", {{"mu", 0.5}});
  const auto B = make_fields(cs);
  const auto W = make_fields(lawson_bryant_to_min(cs));
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 10; ++t) {
    const Complex z(u(rng), u(rng));
    EXPECT_NEAR(metric_factor(B, z), metric_factor(W, z), 1e-9 * metric_factor(W, z));
    EXPECT_NEAR(gauss_curvature(B, z), gauss_curvature(W, z), 1e-9 * std::abs(gauss_curvature(W, z)));
  }
  // eta = sigma / g' has a double pole at 0 for 2 mu = 1
  EXPECT_EQ(function_order(*W.eta, SpherePoint::finite(0.0)), 1);
}

TEST(Lawson, RoundTripPreservesIntrinsicData) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> rad(0.3, 2.0), ang(-1.2, 1.2);
  for (const char* name : {"catenoid", "enneper"}) {
    const auto s = builtin(name);
    const Complex base(1.0, 0.0);
    const auto b = lawson_min_to_bryant(s, base);
    const auto back = lawson_bryant_to_min(b);
    const auto Fs = make_fields(s), Fb = make_fields(b), Fr = make_fields(back);
    const NullLift lift(Fb, base);
    for (int t = 0; t < 100; ++t) {
      const Complex z = std::polar(rad(rng), ang(rng));
      const auto a = intrinsic_sample(Fs, z);
      const auto r = intrinsic_sample(Fr, z);
      EXPECT_EQ(a.e2l, r.e2l);
      EXPECT_EQ(a.K, r.K);
      EXPECT_EQ(a.sigma, r.sigma);
      if (t % 5 == 0) {
        // through the developed hyperbolic Gauss map
        const auto d = developed_intrinsic_sample(Fb, lift.at(z), z);
        EXPECT_LT(std::abs(d.e2l - a.e2l) / a.e2l, 1e-8);
        EXPECT_LT(std::abs(d.K - a.K) / std::abs(a.K), 1e-8);
        EXPECT_LT(rel(d.sigma, a.sigma), 1e-8);
      }
    }
  }
  EXPECT_THROW(lawson_bryant_to_min(build_surface(builtin_scene("horosphere"))), Unsupported);
  SurfaceSpec umb;
  umb.data = BryantData{parse_expr("(2*z + 1)/(z - 3)"), parse_expr("z")};
  EXPECT_THROW(lawson_bryant_to_min(umb), DegenerateData);
}

TEST(Immersion, PlaneAndPeriods) {
  const auto x = minimal_immersion(builtin("plane"), 0.0, Complex(0.6, -0.2));
  EXPECT_NEAR(x[0], 0.3, 1e-12);
  EXPECT_NEAR(x[1], 0.1, 1e-12);
  EXPECT_NEAR(x[2], 0.0, 1e-12);
  // catenoid: paths above and below 0 agree (zero real period); helicoid: differ by 2 pi e3
  for (const char* name : {"catenoid", "helicoid"}) {
    const auto s = builtin(name);
    const auto up = minimal_immersion(s, 1.0, -1.0, {Complex(1, 1), Complex(-1, 1)});
    const auto dn = minimal_immersion(s, 1.0, -1.0, {Complex(1, -1), Complex(-1, -1)});
    const double expect = std::string(name) == "helicoid" ? 2 * kPi : 0.0;
    EXPECT_NEAR(std::abs(up[2] - dn[2]), expect, 1e-8) << name;
    EXPECT_NEAR(up[0] - dn[0], 0.0, 1e-8);
  }
  EXPECT_THROW(minimal_immersion(builtin("catenoid"), -1.0, 1.0), PathThroughSingularity);
  // a closed loop around a Scherk puncture reproduces the monodromy period
  const auto sc = builtin("scherk");
  const auto loop = minimal_immersion(sc, Complex(1.3, 0), Complex(1.3, 0), {Complex(1, 0.3), Complex(0.7, 0), Complex(1, -0.3)});
  const auto rep = monodromy_report(sc);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(loop[k], (*rep.periods[0])[k], 1e-8);
}

TEST(Immersion, HarmonicFormsAreDifferentials) {
  const auto s = builtin("enneper");
  const auto F = make_fields(s);
  const Complex z(0.4, -0.7);
  const double h = 1e-5;
  const auto w = harmonic_forms(F, z);
  const auto xe = minimal_immersion(s, 0.0, z + h), xw = minimal_immersion(s, 0.0, z - h);
  const auto xn = minimal_immersion(s, 0.0, z + Complex(0, h)), xs = minimal_immersion(s, 0.0, z - Complex(0, h));
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR((xe[k] - xw[k]) / (2 * h), w[k][0], 1e-7);
    EXPECT_NEAR((xn[k] - xs[k]) / (2 * h), w[k][1], 1e-7);
  }
  const auto p = harmonic_forms(make_fields(builtin("plane")), z);
  EXPECT_EQ(p[2][0], 0.0);
  EXPECT_EQ(p[2][1], 0.0);
}

TEST(AssociatedFamily, IntrinsicUnchanged) {
  const auto s = builtin("catenoid");
  for (double th : {0.0, kPi, kPi / 2}) {
    const auto F0 = make_fields(s), F1 = make_fields(associated_family(s, th));
    for (Complex z : {Complex(0.3, 0.2), Complex(-1.4, 0.9)}) {
      EXPECT_EQ(metric_factor(F0, z), metric_factor(F1, z));
      EXPECT_EQ(gauss_curvature(F0, z), gauss_curvature(F1, z));
    }
  }
}

TEST(Ros, IdentityConvergesOnCatenoid) {
  const auto F = make_fields(builtin("catenoid"));
  const std::vector<std::pair<std::string, HarmonicForm>> forms{
      {"dx1", dx_form(F, 0)}, {"dx3", dx_form(F, 2)}, {"*dx3", star(dx_form(F, 2))}};
  for (const auto& [label, w] : forms) {
    for (Complex z : {Complex(0.7, 0.4), Complex(-1.3, 0.6)}) {
      std::array<double, 3> err{};
      for (int i = 0; i < 3; ++i) {
        const auto r = ros_identity_residual(F, w, z, 2e-2 / std::pow(2.0, i));
        err[i] = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
      }
      EXPECT_GT(observed_order(err[0], err[1]), 1.9) << label;
      EXPECT_GT(observed_order(err[1], err[2]), 1.9) << label;
      const auto rhs = ros_rhs(F, w, z);
      const double mag = std::sqrt(rhs[0] * rhs[0] + rhs[1] * rhs[1] + rhs[2] * rhs[2]);
      if (label == "*dx3") EXPECT_LT(mag, 1e-10);
      if (label == "dx3") EXPECT_GT(mag, 1e-3);
    }
  }
  const auto P = make_fields(builtin("plane"));
  const auto r = ros_rhs(P, dx_form(P, 0), Complex(0.2, 0.1));
  for (double x : r) EXPECT_EQ(x, 0.0);
}

TEST(ConeAngle, BranchPoint) {
  SurfaceSpec s;
  s.data = WeierstrassData{parse_expr("z"), parse_expr("z^2")};
  s.punctures = {SpherePoint::infinity()};
  const auto F = make_fields(s);
  EXPECT_NEAR(cone_angle(F, 0.0, 1e-3), 6 * kPi, 0.02 * 6 * kPi);
  EXPECT_NEAR(cone_angle(F, Complex(0.5, 0.5), 1e-4), 2 * kPi, 0.01 * 2 * kPi);
}
