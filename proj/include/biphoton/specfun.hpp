#pragma once

// Complex error-function family: Faddeeva w(z), imaginary error function
// erfi(z), the plasma dispersion function F(x) on the real axis, and the
// composite functions F-(x), F+(x) that appear in the Gaussian-state
// excitation probabilities.
//
// Everything is routed through w(z), which stays bounded in the upper half
// plane. Products such as exp(-x^2) * erfi(x + i/2) are never formed raw.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace biphoton::specfun {

using Complex = std::complex<double>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sign choice of F-+(x): `minus` carries e^{-ix} and erfi(x + i/2),
/// `plus` carries e^{+ix} and erfi(x - i/2).
enum class Branch { minus, plus };

/// erfi is evaluated to full accuracy for |Re z| <= 30 and |Im z| <= 30.
inline constexpr double kErfiDomain = 30.0;

/// Beyond this |x| the composite F-+ switches from the literal erfi formula to
/// the Faddeeva-difference form.
inline constexpr double kFpmLiteralLimit = 5.0;

namespace detail {

inline constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;

inline std::string describe(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

inline void require_finite(Complex z, const char* fn) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(fn) + ": non-finite argument " + describe(z));
  }
}

inline Complex require_finite_result(Complex v, Complex z, const char* fn) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw DomainError(std::string(fn) + ": result not representable in double at z = " +
                      describe(z));
  }
  return v;
}

// w(z) for Re z >= 0, Im z >= 0. Power series of exp(-z^2)(1 + i erfi z) inside
// a small ellipse; elsewhere Gautschi's continued fraction with the shifted
// Taylor sum (h > 0) near the origin and the plain Laplace fraction far out.
inline Complex faddeeva_first_quadrant(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double xs = x / 6.3;
  const double ys = y / 4.4;
  double rho2 = xs * xs + ys * ys;

  if (rho2 < 0.085264) {
    const double rho = (1.0 - 0.85 * ys) * std::sqrt(rho2);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * rho));
    const Complex z2 = z * z;
    Complex sum = 1.0 / (2.0 * n + 1.0);
    for (int k = n; k >= 1; --k) {
      sum = sum * z2 / static_cast<double>(k) + 1.0 / (2.0 * k - 1.0);
    }
    return std::exp(-z2) * (1.0 + Complex(0.0, kTwoOverSqrtPi) * z * sum);
  }

  double h = 0.0;
  int kappa = 0;
  int nu = 0;
  if (rho2 > 1.0) {
    nu = static_cast<int>(3.0 + 1442.0 / (26.0 * std::sqrt(rho2) + 77.0));
  } else {
    const double rho = (1.0 - ys) * std::sqrt(1.0 - rho2);
    h = 1.88 * rho;
    kappa = static_cast<int>(std::lround(7.0 + 34.0 * rho));
    nu = static_cast<int>(std::lround(16.0 + 26.0 * rho));
  }
  const Complex shifted = h - Complex(0.0, 1.0) * z;
  const double two_h = 2.0 * h;
  double lambda = h > 0.0 ? std::pow(two_h, kappa) : 0.0;
  Complex r = 0.0;
  Complex s = 0.0;
  for (int n = nu; n >= 0; --n) {
    r = 0.5 / (shifted + static_cast<double>(n + 1) * r);
    if (h > 0.0 && n <= kappa) {
      s = r * (lambda + s);
      lambda /= two_h;
    }
  }
  Complex w = kTwoOverSqrtPi * (h > 0.0 ? s : r);
  if (y == 0.0) w.real(std::exp(-x * x));
  return w;
}

inline Complex faddeeva_upper(Complex z) {
  if (z.real() >= 0.0) return faddeeva_first_quadrant(z);
  return std::conj(faddeeva_first_quadrant(-std::conj(z)));
}

// exp(z^2) * w(z) for Im z >= 0, i.e. erfc(-iz); guarded against the
// intermediate exp(z^2) overflowing when the product itself is finite.
inline Complex exp_z2_times_w(Complex z) {
  const Complex w = faddeeva_upper(z);
  const Complex z2 = z * z;
  if (z2.real() < 600.0) return std::exp(z2) * w;
  return std::exp(z2 + std::log(w));
}

inline Complex erfi_series(Complex z) {
  const Complex z2 = z * z;
  Complex term = z;
  Complex sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= z2 / static_cast<double>(n);
    const Complex add = term / (2.0 * n + 1.0);
    sum += add;
    if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

}  // namespace detail

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) = exp(-z^2)(1 + i erfi z).
/// Total over finite z; throws DomainError only when the value itself exceeds
/// the double range (deep in the lower half plane).
inline Complex faddeeva(Complex z) {
  detail::require_finite(z, "faddeeva");
  if (z.imag() >= 0.0) return detail::faddeeva_upper(z);
  // w(z) = 2 exp(-z^2) - w(-z)
  const Complex v = 2.0 * std::exp(-z * z) - detail::faddeeva_upper(-z);
  return detail::require_finite_result(v, z, "faddeeva");
}

/// Imaginary error function erfi(z) = -i erf(iz). Accurate on
/// |Re z|, |Im z| <= kErfiDomain; arguments outside that box, or whose value
/// overflows double, raise DomainError.
inline Complex erfi(Complex z) {
  detail::require_finite(z, "erfi");
  if (std::abs(z.real()) > kErfiDomain || std::abs(z.imag()) > kErfiDomain) {
    throw DomainError("erfi: argument " + detail::describe(z) +
                      " outside the accuracy domain |Re|,|Im| <= 30; rescale the caller");
  }
  if (z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0)) return -erfi(-z);

  Complex v;
  if (std::abs(z) < 2.0) {
    v = detail::erfi_series(z);
  } else if (z.imag() >= 0.0) {
    v = Complex(0.0, 1.0) * (1.0 - detail::exp_z2_times_w(z));
  } else {
    v = Complex(0.0, -1.0) * (1.0 - detail::exp_z2_times_w(-z));
  }
  if (z.imag() == 0.0) v.imag(0.0);
  if (z.real() == 0.0) v.real(0.0);
  return detail::require_finite_result(v, z, "erfi");
}

inline double erfi(double x) { return erfi(Complex(x, 0.0)).real(); }

/// Plasma dispersion function F(x) = exp(-x^2)(1 + (2i/sqrt(pi)) int_0^x e^{y^2} dy)
/// for real x; identical to w(x) on the real axis.
inline Complex plasma_dispersion(double xi) {
  detail::require_finite(xi, "plasma_dispersion");
  return {std::exp(-xi * xi), detail::faddeeva_first_quadrant({std::abs(xi), 0.0}).imag() *
                                  (xi < 0.0 ? -1.0 : 1.0)};
}

namespace detail {

inline Complex f_pm_literal(double xi, Branch branch) {
  const double sign = branch == Branch::minus ? -1.0 : 1.0;
  const Complex shift(0.0, branch == Branch::minus ? 0.5 : -0.5);
  const double gauss = std::exp(-xi * xi);
  const Complex bracket =
      plasma_dispersion(xi) + Complex(0.0, 2.0) * gauss * (erfi(Complex(xi, 0.0)) - erfi(xi + shift));
  return std::exp(Complex(0.0, sign * xi)) * bracket;
}

inline Complex f_pm_faddeeva(double xi, Branch branch) {
  const double e_quarter = std::exp(-0.25);
  if (branch == Branch::minus) {
    return 3.0 * std::exp(Complex(0.0, -xi)) * faddeeva(xi) -
           2.0 * e_quarter * faddeeva(Complex(xi, 0.5));
  }
  return 3.0 * std::exp(Complex(0.0, xi)) * faddeeva(xi) -
         4.0 * std::exp(Complex(-xi * xi, xi)) + 2.0 * e_quarter * faddeeva(Complex(-xi, 0.5));
}

}  // namespace detail

/// Composite function
///   F-+(x) = e^{-+ix} { F(x) + 2i e^{-x^2} [erfi(x) - erfi(x +- i/2)] }.
/// Literal evaluation for |x| <= kFpmLiteralLimit, the equivalent
/// Faddeeva-difference form beyond; finite for every finite x.
inline Complex f_pm(double xi, Branch branch) {
  detail::require_finite(xi, "f_pm");
  if (std::abs(xi) <= kFpmLiteralLimit) return detail::f_pm_literal(xi, branch);
  return detail::f_pm_faddeeva(xi, branch);
}

}  // namespace biphoton::specfun
