#include <gtest/gtest.h>

#include <random>

#include "framed/expr_parse.hpp"
#include "framed/moebius.hpp"
#include "framed/schwarzian.hpp"
#include "framed/schwarzian_series.hpp"

using namespace framed;

namespace {

const Expr z = Expr::var();

Complex rnd(std::mt19937& rng, double s = 1.0) {
  std::uniform_real_distribution<double> u(-s, s);
  return {u(rng), u(rng)};
}

Expr random_rational(std::mt19937& rng) {
  const Expr num = Expr::constant(rnd(rng)) + Expr::constant(rnd(rng) + 1.0) * z + Expr::constant(rnd(rng)) * pow(z, 2);
  const Expr den = Expr::constant(rnd(rng) + 2.0) + Expr::constant(rnd(rng)) * z + pow(z, 2);
  return num / den;
}

Mat2 random_mat(std::mt19937& rng) {
  for (;;) {
    Mat2 m{rnd(rng), rnd(rng), rnd(rng), rnd(rng)};
    if (std::abs(m.det()) > 0.2) return m;
  }
}

Expr compose(const Mat2& m, const Expr& g) { return (m.a * g + m.b) / (m.c * g + m.d); }

// Independent oracle: S{f,z} = f'''/f' - 3/2 (f''/f')^2 by symbolic differentiation.
Complex schwarzian_z(const Expr& f, Complex w) {
  const Expr f1 = differentiate(f), f2 = differentiate(f1), f3 = differentiate(f2);
  const Complex a = f1.eval(w), b = f2.eval(w), c = f3.eval(w);
  return c / a - 1.5 * (b / a) * (b / a);
}

}  // namespace

TEST(Schwarzian, Examples) {
  for (Complex w : {Complex(0.3, 0.4), Complex(-1.2, 0.1)}) {
    EXPECT_LT(std::abs(schwarzian(pow(z, 2), z).eval(w) + 1.5 / (w * w)), 1e-13);
    EXPECT_LT(std::abs(schwarzian_value(pow(z, 2), z, w) + 1.5 / (w * w)), 1e-13);
    for (long n = 2; n <= 5; ++n) {
      const Complex expect = static_cast<double>(1 - n * n) / (2.0 * w * w);
      EXPECT_LT(std::abs(schwarzian_value(pow(z, n), z, w) - expect), 1e-12 * std::abs(expect));
    }
  }
  EXPECT_THROW(schwarzian(Expr::constant(2.0), z), DegenerateData);
}

TEST(Schwarzian, SymbolicMatchesCocycleOracle) {
  std::mt19937 rng(21);
  for (int t = 0; t < 20; ++t) {
    const Expr f = random_rational(rng), g = random_rational(rng);
    const QuadDifferential q = schwarzian(f, g);
    for (int p = 0; p < 10; ++p) {
      const Complex w = rnd(rng);
      const Complex oracle = schwarzian_z(f, w) - schwarzian_z(g, w);
      EXPECT_LT(std::abs(q.eval(w) - oracle), 1e-8 * std::max(1.0, std::abs(oracle)));
      EXPECT_LT(std::abs(schwarzian_value(f, g, w) - oracle), 1e-8 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST(Schwarzian, ShiftIdentity) {
  std::mt19937 rng(4);
  EXPECT_TRUE(same(schwarzian_shift({z}, 1).coeff, z));
  EXPECT_LT(std::abs(schwarzian_shift({Expr::constant(0.0)}, 2).eval(0.5) - 1.5 / 0.25), 1e-14);
  for (int t = 0; t < 10; ++t) {
    const Expr f = random_rational(rng);
    for (long n = 1; n <= 4; ++n) {
      const QuadDifferential shifted = schwarzian_shift(schwarzian(f, z), n);
      const Complex w = rnd(rng) + 0.5;
      const Complex direct = schwarzian_value(f, pow(z, n), w);
      EXPECT_LT(std::abs(shifted.eval(w) - direct), 1e-8 * std::max(1.0, std::abs(direct)));
      const QuadDifferential back = schwarzian_shift(shifted, -n);
      EXPECT_LT(std::abs(back.eval(w) - schwarzian(f, z).eval(w)), 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST(Schwarzian, ClassifyEnd) {
  EXPECT_TRUE(std::holds_alternative<EndType1>(classify_end(laurent(z + 1.0, 0.0, 6), 1)));
  const EndClass t2 = classify_end(laurent(Expr::constant(1.5) * pow(z, -2), 0.0, 6), 1);
  ASSERT_TRUE(std::holds_alternative<EndType2>(t2));
  EXPECT_EQ(std::get<EndType2>(t2).k, 2);
  EXPECT_TRUE(std::holds_alternative<EndIrregular>(classify_end(laurent(pow(z, -3), 0.0, 6), 1)));
  EXPECT_TRUE(std::holds_alternative<EndIrregular>(classify_end(laurent(Expr::constant(0.7) * pow(z, -2), 0.0, 6), 1)));
}

TEST(SchwarzianSeries, ZeroSigma) {
  const auto sol = solve_schwarzian_series(laurent(Expr::constant(0.0), 0.0, 30), 1, 24);
  EXPECT_EQ(sol.f_series.leading_order(), 1);
  EXPECT_EQ(sol.f_series.coefficient(1), Complex(1.0));
  for (long e = 2; e <= 24; ++e) EXPECT_EQ(sol.f_series.coefficient(e), Complex(0.0));
}

TEST(SchwarzianSeries, RecoversNormalizedDevelopingMap) {
  std::mt19937 rng(8);
  for (long n = 1; n <= 3; ++n) {
    for (int t = 0; t < 5; ++t) {
      const Mat2 m = random_mat(rng);
      const Expr inner = pow(z, n) * (1.0 + Expr::constant(rnd(rng, 0.5)) * z + Expr::constant(rnd(rng, 0.5)) * pow(z, 2));
      // sigma = -S{m o inner, z^n} = -(S{inner, z} + (n^2-1)/(2 z^2)); m drops out
      series::Coeffs shift(64);
      shift[0] = static_cast<double>(n * n - 1) / 2.0;
      const LaurentSeries sigma = -(schwarzian_of_series(laurent(inner, 0.0, 40)) + make_laurent(-2, shift));
      const auto sol = solve_schwarzian_series(sigma, n, 24);
      EXPECT_LT(sol.backsub_error, 1e-9);
      // oracle: fold the normalization f -> y/(1 + t y), y = (f - f(0))/c_n into m, then expand
      const LaurentSeries s = laurent(compose(m, inner), 0.0, 2 * n + 2);
      const Complex f00 = s.coefficient(0), c = s.coefficient(n), tt = s.coefficient(2 * n) / c;
      const LaurentSeries F = laurent(compose(Mat2{1.0, -f00, tt, c - tt * f00} * m, inner), 0.0, 30);
      for (long e = n; e <= 20; ++e)
        EXPECT_LT(std::abs(sol.f_series.coefficient(e) - F.coefficient(e)) / std::max(1.0, std::abs(F.coefficient(e))), 1e-9)
            << "n=" << n << " e=" << e;
    }
  }
}

TEST(SchwarzianSeries, VanishingCoefficientsForHighOrderZero) {
  std::mt19937 rng(13);
  for (long n = 1; n <= 4; ++n) {
    const Expr h = Expr::constant(rnd(rng) + 1.0) + Expr::constant(rnd(rng)) * z;
    const auto sol = solve_schwarzian_series(pow(z, n) * h, n, 24);
    for (long j = 1; j <= n; ++j) {
      EXPECT_EQ(sol.a[static_cast<std::size_t>(j)], Complex(0.0)) << n << " " << j;
      EXPECT_EQ(sol.b[static_cast<std::size_t>(j)], Complex(0.0)) << n << " " << j;
    }
    EXPECT_NE(sol.a[static_cast<std::size_t>(n + 2)], Complex(0.0));
    // critical point of f has the multiplicity of g: f = z^n (1 + ...)
    EXPECT_EQ(sol.f_series.leading_order(), n);
    EXPECT_EQ(sol.f_series.coefficient(n), Complex(1.0));
    EXPECT_LT(sol.backsub_error, 1e-9);
  }
  // order n-1 is enough for the vanishing pattern
  for (long n = 2; n <= 4; ++n) {
    const auto sol = solve_schwarzian_series(pow(z, n - 1) * 0.75, n, 24);
    for (long j = 1; j <= n; ++j) EXPECT_EQ(sol.a[static_cast<std::size_t>(j)], Complex(0.0));
    EXPECT_NE(sol.a[static_cast<std::size_t>(n + 1)], Complex(0.0));
  }
  // lower orders either break the resonance condition or feed some a_j with j <= n
  EXPECT_THROW(solve_schwarzian_series(Expr::constant(0.75), 2, 24), ResonanceError);
  const auto sol3 = solve_schwarzian_series(Expr::constant(0.75), 3, 24);
  EXPECT_NE(sol3.a[2], Complex(0.0));
  EXPECT_LT(sol3.backsub_error, 1e-12);
}

TEST(SchwarzianSeries, PolesResonanceAndType2) {
  EXPECT_THROW(solve_schwarzian_series(pow(z, -3), 1, 24), BadPole);
  EXPECT_THROW(solve_schwarzian_series(Expr::constant(0.3) * pow(z, -2), 1, 24), BadPole);
  EXPECT_THROW(solve_schwarzian_series(Expr::constant(0.5) * pow(z, -1), 1, 24), ResonanceError);
  const auto sol = solve_schwarzian_series(Expr::constant(1.5) * pow(z, -2), 1, 24);
  EXPECT_EQ(sol.k, 2);
  EXPECT_EQ(sol.f_series.leading_order(), 2);
  EXPECT_LT(sol.backsub_error, 1e-12);
}
