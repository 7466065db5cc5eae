#pragma once

// Reference evaluations of the special functions straight from their defining
// integrals, in long double adaptive quadrature.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "biphoton/quadrature.hpp"
#include "biphoton/specfun.hpp"

namespace reference {

using biphoton::specfun::Branch;
using biphoton::specfun::Complex;
namespace quad = biphoton::quad;

using LComplex = std::complex<long double>;
constexpr long double kPi = 3.141592653589793238462643383279502884L;

inline double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// erfi(z) = (2/sqrt(pi)) z int_0^1 exp(z^2 t^2) dt along the straight path.
inline Complex erfi_oracle(Complex z) {
  const LComplex zl(z.real(), z.imag());
  auto f = [&](long double t) { return std::exp(zl * zl * t * t); };
  const auto r = quad::integrate<long double>(f, 0.0L, 1.0L, {0.0, 1e-15, 20000});
  const LComplex v = 2.0L / std::sqrt(kPi) * zl * r.value;
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

// w(z) = (1/sqrt(pi)) int_0^inf exp(-t^2/4 + i z t) dt, valid for every z.
inline Complex faddeeva_oracle(Complex z) {
  const LComplex zl(z.real(), z.imag());
  const LComplex i(0.0L, 1.0L);
  auto f = [&](long double t) { return std::exp(-t * t / 4.0L + i * zl * t); };
  const long double peak = std::max(0.0L, -2.0L * zl.imag());
  const long double edge = peak + 24.0L;
  std::vector<long double> edges;
  for (int k = 0; k <= 64; ++k) edges.push_back(edge * k / 64.0L);
  const auto r = quad::integrate_panels<long double>(f, edges, {0.0, 1e-15, 20000});
  const LComplex v = r.value / std::sqrt(kPi);
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

// F(x) from its defining integral: exp(-x^2)(1 + (2i/sqrt(pi)) int_0^x exp(y^2) dy).
inline Complex plasma_oracle(double x) {
  auto f = [](long double y) { return std::exp(y * y); };
  const long double xl = x;
  const long double integral = quad::integrate<long double>(f, 0.0L, xl, {0.0, 1e-15, 20000}).value;
  const long double g = std::exp(-xl * xl);
  return {static_cast<double>(g), static_cast<double>(g * 2.0L / std::sqrt(kPi) * integral)};
}

inline Complex f_pm_oracle(double x, Branch branch) {
  const double sign = branch == Branch::minus ? -1.0 : 1.0;
  const Complex shift(0.0, branch == Branch::minus ? 0.5 : -0.5);
  const Complex bracket = plasma_oracle(x) + Complex(0.0, 2.0) * std::exp(-x * x) *
                                                 (erfi_oracle(Complex(x, 0.0)) - erfi_oracle(x + shift));
  return std::exp(Complex(0.0, sign * x)) * bracket;
}

}  // namespace reference
