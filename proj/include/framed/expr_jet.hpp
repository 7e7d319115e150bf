#pragma once

#include "framed/expr.hpp"
#include "framed/jet.hpp"

namespace framed {

namespace detail {
struct JetVisitor {
  Complex z0;
  std::size_t n;  // number of coefficients

  Jet constant(Complex c) const { return Jet::constant(z0, c, n - 1); }
  Jet var() const { return Jet::variable(z0, n - 1); }
  Jet neg(const Jet& a) const { return -a; }
  Jet add(const Jet& a, const Jet& b) const { return a + b; }
  Jet sub(const Jet& a, const Jet& b) const { return a - b; }
  Jet mul(const Jet& a, const Jet& b) const { return a * b; }
  Jet div(const Jet& a, const Jet& b) const {
    if (b.value() == Complex{}) throw SingularPoint("pole at " + format_complex(z0));
    return a / b;
  }
  Jet ipow(const Jet& a, long k) const {
    if (k < 0 && a.value() == Complex{}) throw SingularPoint("pole at " + format_complex(z0));
    return {z0, series::pow_int(a.coeffs(), k, n)};
  }
  Jet rpow(const Jet& a, double mu, std::optional<int> br) const {
    if (is_integral(mu)) return ipow(a, static_cast<long>(mu));
    const Complex head = real_power_value(a.value(), mu, br);
    if (a.value() == Complex{}) throw SingularPoint("branch point at " + format_complex(z0));
    return {z0, series::pow_real(a.coeffs(), mu, head, n)};
  }
  Jet log(const Jet& a, std::optional<int> br) const {
    const Complex head = log_value(a.value(), br);
    return {z0, series::log(a.coeffs(), head, n)};
  }
};
}  // namespace detail

/// Taylor coefficients of e at z0 through order k.
inline Jet eval_jet(const Expr& e, Complex z0, std::size_t k) {
  detail::JetVisitor v{z0, k + 1};
  return fold<Jet>(e, v);
}

}  // namespace framed
