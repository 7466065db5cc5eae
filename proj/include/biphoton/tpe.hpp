#pragma once

// Closed-form two-photon excitation (TPE) probabilities for the four SPDC
// states acting on a (possibly coupled) two-particle acceptor.
//
// p_tpe() evaluates the reference closed forms term by term. For the Gaussian
// kinds those forms do not coincide with the second-order perturbative
// integral they summarize; p_tpe_rederived() carries closed forms obtained
// directly from that integral (identical to p_tpe() for SD and SI). See
// README.md, "Closed forms and the perturbative oracle".

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "biphoton/acceptor.hpp"
#include "biphoton/constants.hpp"
#include "biphoton/source.hpp"
#include "biphoton/specfun.hpp"

namespace biphoton {

enum class ResonancePolicy {
  nominal,   // omega_f from the acceptor as given
  enforced,  // omega_f := omega_s0 + omega_i0
};

inline std::string_view to_string(ResonancePolicy p) {
  return p == ResonancePolicy::nominal ? "nominal" : "enforced";
}

inline ResonancePolicy policy_from_string(std::string_view s) {
  if (s == "nominal") return ResonancePolicy::nominal;
  if (s == "enforced") return ResonancePolicy::enforced;
  throw std::invalid_argument("unknown resonance policy '" + std::string(s) + "'");
}

/// Overrides the doubly-excited frequency under the enforced policy. The
/// eigenfrequencies are untouched, so omega_alpha + omega_beta may then differ
/// from omega_f by the nominal detuning.
inline EigenAcceptor apply_policy(EigenAcceptor acc, const SpdcSource& src, ResonancePolicy policy) {
  if (policy == ResonancePolicy::enforced) acc.omega_f = src.omega_s0 + src.omega_i0;
  return acc;
}

struct TpeResult {
  double probability = 0.0;
  StateKind kind = StateKind::SD;
  SpdcSource source;
  EigenAcceptor acceptor;
};

class TpeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// exp[-2 Tp^2 (ws0 + wi0 - wf)^2]; equals one exactly on two-photon resonance.
inline double resonance_prefactor(const EigenAcceptor& acc, const SpdcSource& src) {
  const double detuning = src.omega_s0 + src.omega_i0 - acc.omega_f;
  return std::exp(-2.0 * src.t_pump * src.t_pump * detuning * detuning);
}

namespace detail {

using Complex = std::complex<double>;

// Below this |x * 2Te| the removable singularities use their series.
inline constexpr double kSeriesThreshold = 1e-6;

// w_i0 w_s0 / (hbar^2 eps0^2 c^2 A^2) times the resonance prefactor.
inline double field_factor(const EigenAcceptor& acc, const SpdcSource& src) {
  using C = PhysicalConstants;
  const double denom = C::hbar * C::eps0 * C::c_light * src.area;
  return src.omega_i0 * src.omega_s0 / (denom * denom) * resonance_prefactor(acc, src);
}

// sin(2 Te x) / x
inline double sine_kernel(double x, double te) {
  const double u = 2.0 * te * x;
  if (std::abs(u) < kSeriesThreshold) return 2.0 * te * (1.0 - u * u / 6.0);
  return std::sin(u) / x;
}

// (1 - exp(-i 2 Te x)) / x, with 1 - e^{-iu} = 2 sin^2(u/2) + i sin(u).
inline Complex step_kernel(double x, double te) {
  const double u = 2.0 * te * x;
  if (std::abs(u) < kSeriesThreshold) return 2.0 * te * Complex(0.5 * u, 1.0 - u * u / 6.0);
  const double half = std::sin(0.5 * u);
  return Complex(2.0 * half * half, std::sin(u)) / x;
}

template <typename Term>
Complex pathway_sum(const EigenAcceptor& acc, Term&& term) {
  return acc.pathway_alpha() * term(acc.omega_alpha) + acc.pathway_beta() * term(acc.omega_beta);
}

inline std::string context(StateKind kind, const EigenAcceptor& acc, const SpdcSource& src) {
  std::ostringstream os;
  os.precision(10);
  os << "p_tpe(" << to_token(kind) << ", Te=" << s_to_fs(src.t_ent) << " fs, Tp=" << s_to_fs(src.t_pump)
     << " fs, w_alpha=" << acc.omega_alpha << ", w_beta=" << acc.omega_beta << ")";
  return os.str();
}

inline double closed_form(StateKind kind, const EigenAcceptor& acc, const SpdcSource& src) {
  using std::numbers::pi;
  const double te = src.t_ent;
  const double tp = src.t_pump;
  const double alpha = SpdcSource::alpha;
  const double field = field_factor(acc, src);
  switch (kind) {
    case StateKind::SD: {
      const Complex s = pathway_sum(acc, [&](double wj) {
        const double x = wj - src.omega_i0;
        return sine_kernel(x, te) * std::exp(Complex(0.0, -2.0 * te * x));
      });
      return tp / te * std::sqrt(2.0 * pi) / 2.0 * field * std::norm(s);
    }
    case StateKind::SI: {
      const Complex s = pathway_sum(acc, [&](double wj) {
        return step_kernel(wj - src.omega_i0, te) + step_kernel(wj - src.omega_s0, te);
      });
      return tp / te * std::sqrt(2.0 * pi) / 8.0 * field * std::norm(s);
    }
    case StateKind::GD: {
      const Complex s = pathway_sum(acc, [&](double wj) {
        return specfun::f_pm((wj - src.omega_i0) * alpha * 2.0 * te, specfun::Branch::minus) +
               specfun::f_pm((wj - src.omega_s0) * alpha * 2.0 * te, specfun::Branch::plus);
      });
      return alpha * tp * te * pi / 4.0 * field * std::norm(s);
    }
    case StateKind::GI: {
      const Complex s = pathway_sum(acc, [&](double wj) {
        return specfun::plasma_dispersion((wj - src.omega_i0) * alpha * 2.0 * te) +
               specfun::plasma_dispersion((wj - src.omega_s0) * alpha * 2.0 * te);
      });
      return alpha * tp * te * pi / 4.0 * field * std::norm(s);
    }
  }
  return 0.0;
}

inline double rederived_gaussian(StateKind kind, const EigenAcceptor& acc, const SpdcSource& src) {
  using std::numbers::pi;
  const double te = src.t_ent;
  const double alpha = SpdcSource::alpha;
  // Walk-off delay Te measured in units of the Gaussian time scale 2 alpha Te.
  const double u0 = 1.0 / (2.0 * alpha);
  const double damp = std::exp(-u0 * u0);
  const Complex s = pathway_sum(acc, [&](double wj) -> Complex {
    const double xi_i = (wj - src.omega_i0) * alpha * 2.0 * te;
    const double xi_s = (wj - src.omega_s0) * alpha * 2.0 * te;
    if (kind == StateKind::GI) return specfun::faddeeva(-xi_s) + specfun::faddeeva(-xi_i);
    // e^{-u0^2} w(-xi_i - i u0) written through the upper-half-plane value.
    const Complex late = 2.0 * std::exp(Complex(-xi_i * xi_i, -2.0 * xi_i * u0)) -
                         damp * specfun::faddeeva(Complex(xi_i, u0));
    return damp * specfun::faddeeva(Complex(-xi_s, u0)) + late;
  });
  return alpha * src.t_pump * te * pi * field_factor(acc, src) * std::norm(s);
}

inline TpeResult finish(StateKind kind, const EigenAcceptor& acc, const SpdcSource& src, double p) {
  if (!std::isfinite(p) || p < 0.0) {
    throw TpeError(context(kind, acc, src) + ": non-finite or negative probability");
  }
  return {p, kind, src, acc};
}

}  // namespace detail

/// Closed-form TPE probability for `kind` (reference forms, see file comment).
inline TpeResult p_tpe(StateKind kind, const EigenAcceptor& acc, const SpdcSource& src) {
  src.validate();
  try {
    return detail::finish(kind, acc, src, detail::closed_form(kind, acc, src));
  } catch (const specfun::DomainError& e) {
    throw TpeError(detail::context(kind, acc, src) + ": " + e.what());
  }
}

/// Closed forms rederived from the second-order amplitude; agree with the
/// time-domain oracle for all four kinds.
inline TpeResult p_tpe_rederived(StateKind kind, const EigenAcceptor& acc, const SpdcSource& src) {
  src.validate();
  if (is_sinc(kind)) return p_tpe(kind, acc, src);
  try {
    return detail::finish(kind, acc, src, detail::rederived_gaussian(kind, acc, src));
  } catch (const specfun::DomainError& e) {
    throw TpeError(detail::context(kind, acc, src) + ": " + e.what());
  }
}

}  // namespace biphoton
