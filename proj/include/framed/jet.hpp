#pragma once

#include <cstddef>
#include <vector>

#include "framed/series.hpp"

namespace framed {

/// Truncated Taylor expansion of a holomorphic function about `center`.
/// coeffs[j] is the j-th Taylor coefficient f^(j)(center)/j!, j = 0..order.
class Jet {
 public:
  Jet() = default;
  Jet(Complex center, std::vector<Complex> coeffs) : center_(center), coeffs_(std::move(coeffs)) {}

  static Jet constant(Complex center, Complex value, std::size_t order) {
    std::vector<Complex> c(order + 1);
    c[0] = value;
    return {center, std::move(c)};
  }
  static Jet variable(Complex center, std::size_t order) {
    std::vector<Complex> c(order + 1);
    c[0] = center;
    if (order >= 1) c[1] = 1.0;
    return {center, std::move(c)};
  }

  Complex center() const { return center_; }
  std::size_t order() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex operator[](std::size_t j) const { return j < coeffs_.size() ? coeffs_[j] : Complex{}; }
  Complex value() const { return (*this)[0]; }

  /// j-th derivative at the center (j! times the Taylor coefficient).
  Complex derivative_value(std::size_t j) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= j; ++i) fact *= static_cast<double>(i);
    return fact * (*this)[j];
  }

  /// Jet of the derivative, one order lower.
  Jet derivative() const {
    const std::size_t n = coeffs_.size() > 1 ? coeffs_.size() - 1 : 1;
    return {center_, series::derivative(coeffs_, n)};
  }

  Complex eval(Complex z) const { return series::eval(coeffs_, z - center_); }

  friend Jet operator+(const Jet& a, const Jet& b) { return {a.center_, series::add(a.coeffs_, b.coeffs_, common(a, b))}; }
  friend Jet operator-(const Jet& a, const Jet& b) { return {a.center_, series::sub(a.coeffs_, b.coeffs_, common(a, b))}; }
  friend Jet operator*(const Jet& a, const Jet& b) { return {a.center_, series::mul(a.coeffs_, b.coeffs_, common(a, b))}; }
  friend Jet operator/(const Jet& a, const Jet& b) { return {a.center_, series::div(a.coeffs_, b.coeffs_, common(a, b))}; }
  friend Jet operator*(Complex s, const Jet& a) { return {a.center_, series::scale(a.coeffs_, s, a.coeffs_.size())}; }
  friend Jet operator-(const Jet& a) { return Complex{-1.0} * a; }

 private:
  static std::size_t common(const Jet& a, const Jet& b) { return std::min(a.coeffs_.size(), b.coeffs_.size()); }

  Complex center_{};
  std::vector<Complex> coeffs_;
};

}  // namespace framed
