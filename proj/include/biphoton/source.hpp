#pragma once

// SPDC photon-pair source: pump duration, entanglement time, central
// frequencies and effective field area, plus the four joint spectral
// amplitudes (sinc / Gaussian, distinguishable / indistinguishable).
//
// Under group-velocity matching the crystal phases reduce to a global phase
// (dropped) times the walk-off factor exp(-i Te (Wi - Ws)) for the
// distinguishable kinds, so no crystal length or group index is stored.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "biphoton/constants.hpp"
#include "biphoton/quadrature.hpp"

namespace biphoton {

enum class StateKind { SD, SI, GD, GI };

inline constexpr std::array<StateKind, 4> kAllKinds = {StateKind::SD, StateKind::SI, StateKind::GD,
                                                       StateKind::GI};

inline std::string_view to_token(StateKind kind) {
  switch (kind) {
    case StateKind::SD: return "sd";
    case StateKind::SI: return "si";
    case StateKind::GD: return "gd";
    case StateKind::GI: return "gi";
  }
  return "?";
}

inline StateKind kind_from_token(std::string_view token) {
  for (StateKind k : kAllKinds) {
    if (to_token(k) == token) return k;
  }
  throw std::invalid_argument("unknown state token '" + std::string(token) +
                              "' (expected sd|si|gd|gi)");
}

constexpr bool is_sinc(StateKind kind) { return kind == StateKind::SD || kind == StateKind::SI; }
constexpr bool is_distinguishable(StateKind kind) {
  return kind == StateKind::SD || kind == StateKind::GD;
}

enum class CorrelationRegime { AntiCorrelated, Uncorrelated, Correlated };

struct SpdcSource {
  double omega_s0 = 0.0;  // rad/s
  double omega_i0 = 0.0;  // rad/s
  double t_pump = 0.0;    // s
  double t_ent = 0.0;     // s
  double area = 0.0;      // m^2
  /// Gaussian width constant of the sinc(x) ~ exp(-alpha^2 x^2) substitution.
  static constexpr double alpha = 0.455;

  static SpdcSource from_wavelengths(double lambda_s_nm, double lambda_i_nm, double t_pump,
                                     double t_ent, double area) {
    return {omega_from_wavelength_nm(lambda_s_nm), omega_from_wavelength_nm(lambda_i_nm), t_pump,
            t_ent, area};
  }

  void validate() const {
    if (!(t_pump > 0.0) || !std::isfinite(t_pump)) {
      throw std::invalid_argument("SpdcSource: pump duration must be positive");
    }
    if (!(t_ent > 0.0) || !std::isfinite(t_ent)) {
      throw std::invalid_argument("SpdcSource: entanglement time must be positive");
    }
    if (!(area > 0.0) || !std::isfinite(area)) {
      throw std::invalid_argument("SpdcSource: field area must be positive");
    }
    if (!(omega_s0 > 0.0) || !(omega_i0 > 0.0)) {
      throw std::invalid_argument("SpdcSource: central frequencies must be positive");
    }
  }

  /// Entanglement time at which the Gaussian state factorizes.
  double uncorrelated_t_ent() const { return t_pump / alpha; }
};

namespace detail {

/// sin(x)/x with the removable point handled by its series.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

inline double jsa_norm_constant(StateKind kind, const SpdcSource& src) {
  using std::numbers::pi;
  if (is_sinc(kind)) return std::sqrt(4.0 * src.t_ent * src.t_pump / (pi * std::sqrt(2.0 * pi)));
  return std::sqrt(4.0 * SpdcSource::alpha * src.t_ent * src.t_pump / pi);
}

}  // namespace detail

/// Pump envelope E_p(S) = exp(-Tp^2 S^2) of the frequency sum S = Ws + Wi.
inline double pump_envelope(const SpdcSource& src, double sum) {
  return std::exp(-src.t_pump * src.t_pump * sum * sum);
}

/// Difference-coordinate factor g(D) of the mode function, D = Wi - Ws,
/// including the walk-off phase for distinguishable kinds but not the
/// normalization constant.
inline std::complex<double> difference_factor(StateKind kind, const SpdcSource& src, double diff) {
  const double te = src.t_ent;
  const double envelope = is_sinc(kind) ? detail::sinc(te * diff)
                                        : std::exp(-SpdcSource::alpha * SpdcSource::alpha * te * te *
                                                   diff * diff);
  if (!is_distinguishable(kind)) return envelope;
  return envelope * std::exp(std::complex<double>(0.0, -te * diff));
}

/// Joint spectral amplitude Phi(Ws, Wi) in units of s, normalized so that
/// the integral of |Phi|^2 over both detunings is one.
inline std::complex<double> jsa(StateKind kind, const SpdcSource& src, double omega_s,
                                double omega_i) {
  return detail::jsa_norm_constant(kind, src) * pump_envelope(src, omega_s + omega_i) *
         difference_factor(kind, src, omega_i - omega_s);
}

/// Double integral of |Phi|^2 over (Ws, Wi), computed as nested adaptive
/// quadrature in sum/difference coordinates. Gaussian factors are integrated
/// over +-8 standard widths; the sinc factor, whose tail decays only as
/// 1/D^2, over 400 lobes on each side plus the asymptotic tail
/// int_X^inf sin^2(u)/u^2 du ~ 1/(2X) (error below 1e-6). Throws
/// quad::QuadratureError if refinement fails.
inline double norm(StateKind kind, const SpdcSource& src) {
  src.validate();
  const double sum_sigma = 1.0 / (2.0 * src.t_pump);
  const double sum_edge = 8.0 * sum_sigma;

  const quad::Options inner_opt{0.0, 1e-10, 2000};
  auto inner = [&](double sum) -> double {
    auto integrand = [&](double diff) {
      const double ws = 0.5 * (sum - diff);
      const double wi = 0.5 * (sum + diff);
      return std::norm(jsa(kind, src, ws, wi));
    };
    if (is_sinc(kind)) {
      constexpr int kLobes = 400;
      std::vector<double> edges;
      edges.reserve(2 * kLobes + 1);
      const double lobe = std::numbers::pi / src.t_ent;
      for (int k = -kLobes; k <= kLobes; ++k) edges.push_back(k * lobe);
      const double c = detail::jsa_norm_constant(kind, src) * pump_envelope(src, sum);
      const double tails = c * c / src.t_ent / (kLobes * std::numbers::pi);
      return quad::integrate_panels(integrand, edges, inner_opt).value + tails;
    }
    const double diff_edge = 8.0 / (2.0 * SpdcSource::alpha * src.t_ent);
    return quad::integrate(integrand, -diff_edge, diff_edge, inner_opt).value;
  };
  const auto outer = quad::integrate(inner, -sum_edge, sum_edge, quad::Options{0.0, 1e-9, 2000});
  // dWs dWi = dS dD / 2
  return 0.5 * outer.value;
}

inline CorrelationRegime classify(const SpdcSource& src) {
  src.validate();
  const double boundary = src.uncorrelated_t_ent();
  const double tol = 1e-6 * boundary;
  if (src.t_ent < boundary - tol) return CorrelationRegime::AntiCorrelated;
  if (src.t_ent > boundary + tol) return CorrelationRegime::Correlated;
  return CorrelationRegime::Uncorrelated;
}

inline std::string_view to_string(CorrelationRegime r) {
  switch (r) {
    case CorrelationRegime::AntiCorrelated: return "anti-correlated";
    case CorrelationRegime::Uncorrelated: return "uncorrelated";
    case CorrelationRegime::Correlated: return "correlated";
  }
  return "?";
}

}  // namespace biphoton
