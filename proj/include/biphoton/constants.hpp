#pragma once

#include <numbers>

namespace biphoton {

/// CODATA values used throughout; all internal arithmetic is SI.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;    // J s
  static constexpr double eps0 = 8.8541878128e-12;   // F/m
  static constexpr double c_light = 2.99792458e8;    // m/s
  static constexpr double debye = 3.33564e-30;       // C m per D
};

inline constexpr double kFemto = 1e-15;
inline constexpr double kNano = 1e-9;

/// Angular frequency (rad/s) of light with vacuum wavelength `lambda_nm`.
constexpr double omega_from_wavelength_nm(double lambda_nm) {
  return 2.0 * std::numbers::pi * PhysicalConstants::c_light / (lambda_nm * kNano);
}

constexpr double wavelength_nm_from_omega(double omega) {
  return 2.0 * std::numbers::pi * PhysicalConstants::c_light / omega / kNano;
}

constexpr double debye_to_si(double mu_debye) { return mu_debye * PhysicalConstants::debye; }

constexpr double fs_to_s(double t_fs) { return t_fs * kFemto; }
constexpr double s_to_fs(double t_s) { return t_s / kFemto; }

}  // namespace biphoton
