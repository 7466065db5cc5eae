#pragma once

// Two coupled two-level particles and their four-level eigen-representation.
//
// Bare basis {g, a, b, f} with ground energy displaced to zero. The excited
// block [[w_a, J], [J, w_b]] is rotated by theta with tan(2 theta) = J / delta;
// |alpha> = -sin(theta)|a> + cos(theta)|b> is always the lower eigenstate.

#include <cmath>
#include <stdexcept>
#include <string>

#include "biphoton/constants.hpp"

namespace biphoton {

struct AcceptorPair {
  double omega_a = 0.0;     // rad/s
  double omega_b = 0.0;     // rad/s
  double coupling_j = 0.0;  // rad/s
  double mu_ag = 0.0;       // C m
  double mu_bg = 0.0;       // C m
  static constexpr double omega_g = 0.0;

  /// Builds a pair from excitation wavelengths (nm), coupling (rad/s) and
  /// transition dipoles in debye.
  static AcceptorPair from_wavelengths(double lambda_a_nm, double lambda_b_nm, double coupling_j,
                                       double mu_ag_debye, double mu_bg_debye) {
    return {omega_from_wavelength_nm(lambda_a_nm), omega_from_wavelength_nm(lambda_b_nm),
            coupling_j, debye_to_si(mu_ag_debye), debye_to_si(mu_bg_debye)};
  }

  void validate() const {
    if (!(omega_a > 0.0) || !(omega_b > 0.0) || !std::isfinite(omega_a) ||
        !std::isfinite(omega_b)) {
      throw std::invalid_argument("AcceptorPair: transition frequencies must be positive and finite");
    }
    if (!std::isfinite(coupling_j)) throw std::invalid_argument("AcceptorPair: coupling must be finite");
    if (!std::isfinite(mu_ag) || !std::isfinite(mu_bg)) {
      throw std::invalid_argument("AcceptorPair: dipoles must be finite");
    }
  }

  double mean_frequency() const { return 0.5 * (omega_a + omega_b); }
  double half_detuning() const { return 0.5 * (omega_a - omega_b); }
};

struct EigenDipoles {
  double mu_alpha_g = 0.0;
  double mu_beta_g = 0.0;
  double mu_f_alpha = 0.0;
  double mu_f_beta = 0.0;
};

struct EigenAcceptor {
  double omega_alpha = 0.0;
  double omega_beta = 0.0;
  double omega_f = 0.0;
  double theta = 0.0;
  double mu_alpha_g = 0.0;
  double mu_beta_g = 0.0;
  double mu_f_alpha = 0.0;
  double mu_f_beta = 0.0;

  /// Two-photon dipole products mu_fj * mu_jg for j = alpha, beta.
  double pathway_alpha() const { return mu_f_alpha * mu_alpha_g; }
  double pathway_beta() const { return mu_f_beta * mu_beta_g; }
};

/// Rotates the bare transition dipoles into the eigenbasis.
inline EigenDipoles transform_dipoles(double mu_ag, double mu_bg, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return {-s * mu_ag + c * mu_bg, c * mu_ag + s * mu_bg, c * mu_ag - s * mu_bg, s * mu_ag + c * mu_bg};
}

/// Splitting sqrt(delta^2 + J^2); continuous through delta = 0 where the
/// delta*sec(2 theta) form is 0 * inf.
inline double eigen_half_splitting(const AcceptorPair& pair) {
  return std::hypot(pair.half_detuning(), pair.coupling_j);
}

inline EigenAcceptor diagonalize(const AcceptorPair& pair) {
  pair.validate();
  const double delta = pair.half_detuning();
  const double theta = 0.5 * std::atan2(pair.coupling_j, delta);
  const double split = eigen_half_splitting(pair);
  const double mean = pair.mean_frequency();
  const EigenDipoles d = transform_dipoles(pair.mu_ag, pair.mu_bg, theta);
  EigenAcceptor out;
  out.omega_alpha = mean - split;
  out.omega_beta = mean + split;
  out.omega_f = pair.omega_a + pair.omega_b;
  out.theta = theta;
  out.mu_alpha_g = d.mu_alpha_g;
  out.mu_beta_g = d.mu_beta_g;
  out.mu_f_alpha = d.mu_f_alpha;
  out.mu_f_beta = d.mu_f_beta;
  return out;
}

}  // namespace biphoton
