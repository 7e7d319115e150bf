#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "framed/expr.hpp"
#include "framed/expr_jet.hpp"
#include "framed/laurent.hpp"

namespace framed {

/// A quadratic differential q(z) dz^2 on one chart.
struct QuadDifferential {
  Expr coeff;
  Complex eval(Complex z) const { return coeff.eval(z); }
};

/// True if e' vanishes at a few scattered probe points (e is locally constant).
inline bool is_constant_function(const Expr& e) {
  if (e.is_constant()) return true;
  const Expr d = differentiate(e);
  for (Complex p : {Complex(0.3137, 0.2171), Complex(-0.5281, 0.7193), Complex(1.2345, -0.4321)}) {
    try {
      if (std::abs(d.eval(p)) > 1e-12 * std::max(1.0, std::abs(e.eval(p)))) return false;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

/// Symbolic S{f,g} as a dz^2 coefficient:
/// [ (df/dg)^-1 d^3f/dg^3 - 3/2 (df/dg)^-2 (d^2f/dg^2)^2 ] (dg/dz)^2.
inline QuadDifferential schwarzian(const Expr& f, const Expr& g) {
  if (is_constant_function(f) || is_constant_function(g)) throw DegenerateData("Schwarzian of a constant map");
  const Expr gp = differentiate(g);
  const Expr d1 = differentiate(f) / gp;
  const Expr d2 = differentiate(d1) / gp;
  const Expr d3 = differentiate(d2) / gp;
  const Expr r = d2 / d1;
  return {(d3 / d1 - Expr::constant(1.5) * pow(r, 2)) * pow(gp, 2)};
}

/// S{f,g}(z) from order-3 jets of f and g; derivatives in g by the chain rule.
inline Complex schwarzian_value(const Jet& f, const Jet& g) {
  const Jet gp = g.derivative();
  if (gp.value() == Complex{}) throw CriticalPoint("dg vanishes at " + format_complex(g.center()));
  const Jet d1 = f.derivative() / gp;
  if (d1.value() == Complex{}) throw CriticalPoint("df vanishes at " + format_complex(g.center()));
  const Jet d2 = d1.derivative() / gp;
  const Jet d3 = d2.derivative() / gp;
  const Complex a = d2.value() / d1.value();
  return (d3.value() / d1.value() - 1.5 * a * a) * gp.value() * gp.value();
}

inline Complex schwarzian_value(const Expr& f, const Expr& g, Complex z) {
  return schwarzian_value(eval_jet(f, z, 3), eval_jet(g, z, 3));
}

/// q + (n^2-1)/(2 z^2): converts S{f,z} into S{f,z^n}. Negative n applies the inverse shift.
inline QuadDifferential schwarzian_shift(const QuadDifferential& q, long n) {
  const long m = n < 0 ? -n : n;
  const double c = static_cast<double>(m * m - 1) / 2.0;
  if (c == 0.0) return q;
  const Expr term = Expr::constant(n < 0 ? -c : c) * pow(Expr::var(), -2);
  return {q.coeff + term};
}

// ---- end classification ------------------------------------------------------

struct EndType1 {};
struct EndType2 {
  long k;
};
struct EndIrregular {
  std::string reason;
};
using EndClass = std::variant<EndType1, EndType2, EndIrregular>;

/// Classify an end from the Laurent expansion of sigma at the puncture and the
/// local multiplicity n of g there.
inline EndClass classify_end(const LaurentSeries& sigma, long n) {
  if (sigma.is_zero() || sigma.leading_order() >= 0) return EndType1{};
  if (sigma.leading_order() < -2) return EndIrregular{"pole of order " + std::to_string(-sigma.leading_order())};
  const Complex c2 = sigma.coefficient(-2);
  const Complex k2 = 2.0 * c2 + static_cast<double>(n * n);
  if (std::abs(k2.imag()) > 1e-8 * std::max(1.0, std::abs(k2)) || k2.real() < 0)
    return EndIrregular{"z^-2 coefficient is not of the form (k^2-n^2)/2"};
  const double k = std::sqrt(k2.real());
  const double kr = std::nearbyint(k);
  if (std::abs(k - kr) > 1e-8 || kr < 2) return EndIrregular{"2c + n^2 is not a square k^2 with k >= 2"};
  return EndType2{static_cast<long>(kr)};
}

inline std::string to_string(const EndClass& c) {
  if (std::holds_alternative<EndType1>(c)) return "type1";
  if (const auto* t = std::get_if<EndType2>(&c)) return "type2(k=" + std::to_string(t->k) + ")";
  return "irregular";
}

}  // namespace framed
