#pragma once

// Brute-force TPE probability from the second-order time-domain amplitude.
//
// The field amplitude <0|E(t2)E(t1)|psi> and the dipole kernel both factor in
// t+ = (t1 + t2)/2 and tau = t2 - t1, so the double time integral is a product
// of two 1-D integrals. The temporal wavefunction is obtained by FFT of the
// joint spectral amplitude on a uniform grid; the 1-D integrals use a Filon
// rule (linear interpolation of the envelope times the exact carrier phase).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton/acceptor.hpp"
#include "biphoton/constants.hpp"
#include "biphoton/fft.hpp"
#include "biphoton/source.hpp"

namespace biphoton::oracle {

using Complex = std::complex<double>;

class GridResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Ordering {
  causal,  // tau >= 0 only
  both,    // full tau range
};

struct TimeGrid {
  double span_sum = 0.0;   // s, total extent in t+
  double span_diff = 0.0;  // s, extent in tau >= 0 (the grid covers [-span, span))
  std::size_t n_sum = 1024;
  std::size_t n_diff = 1024;

  static constexpr std::size_t kMinCount = 1024;
  static constexpr std::size_t kMaxCount = std::size_t{1} << 22;

  static bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

  void validate(const SpdcSource& src) const {
    if (!(span_sum >= 8.0 * src.t_pump * (1.0 - 1e-12))) {
      throw std::invalid_argument("TimeGrid: span_sum must cover at least 8 pump durations");
    }
    if (!(span_diff >= 8.0 * src.t_ent * (1.0 - 1e-12))) {
      throw std::invalid_argument("TimeGrid: span_diff must cover at least 8 entanglement times");
    }
    for (std::size_t n : {n_sum, n_diff}) {
      if (!power_of_two(n) || n < kMinCount || n > kMaxCount) {
        throw std::invalid_argument("TimeGrid: counts must be powers of two in [1024, 2^22]");
      }
    }
  }

  TimeGrid refined() const { return {span_sum, span_diff, 2 * n_sum, 2 * n_diff}; }

  /// Default grid: Gaussian tails are cut beyond 20 standard widths, so
  /// periodic images of the transform stay below double resolution.
  static TimeGrid for_source(StateKind kind, const SpdcSource& src) {
    if (is_sinc(kind)) return {32.0 * src.t_pump, 16.0 * src.t_ent, 1024, 16384};
    return {32.0 * src.t_pump, 32.0 * src.t_ent, 1024, 8192};
  }
};

namespace detail {

// Uniformly sampled transform f(t) = int dW h(W) exp(-i W t scale) with
// t_m = (m - n/2) dt, m in [0, n). Requires n divisible by 4.
struct Sampled {
  std::vector<Complex> values;
  double dt = 0.0;
  std::size_t n = 0;

  double time(std::size_t m) const { return (static_cast<double>(m) - 0.5 * static_cast<double>(n)) * dt; }

  Complex at(double t) const {
    const double x = t / dt + 0.5 * static_cast<double>(n);
    if (!(x >= 0.0) || x > static_cast<double>(n - 1)) return 0.0;
    const auto m = std::min(static_cast<std::size_t>(x), n - 2);
    const double frac = x - static_cast<double>(m);
    return values[m] * (1.0 - frac) + values[m + 1] * frac;
  }
};

// Samples over t in [-span/2, span/2); `scale` maps the conjugate variable
// (1 for t+ against S, 1/2 for tau against D).
template <typename Spectrum>
Sampled transform(Spectrum&& h, double span, std::size_t n, double scale) {
  const double dt = span / static_cast<double>(n);
  const double dw = 2.0 * std::numbers::pi / (span * scale);
  fft::Transform tr(n, fft::Direction::forward);
  auto buf = tr.data();
  const double half = 0.5 * static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (static_cast<double>(k) - half) * dw;
    buf[k] = (k % 2 == 0 ? 1.0 : -1.0) * Complex(h(w));
  }
  tr.execute();
  Sampled out{std::vector<Complex>(n), dt, n};
  for (std::size_t m = 0; m < n; ++m) out.values[m] = (m % 2 == 0 ? dw : -dw) * buf[m];
  return out;
}

// Weights of int_0^1 ((1-t) fa + t fb) exp(-i theta t) dt.
struct FilonWeights {
  Complex a;
  Complex b;
};

inline FilonWeights filon_weights(double theta) {
  if (std::abs(theta) < 0.05) {
    // int t^j (-i theta t)^k / k! over [0, 1]
    Complex e0 = 0.0;
    Complex b = 0.0;
    Complex p = 1.0;
    for (int k = 0; k < 10; ++k) {
      e0 += p / static_cast<double>(k + 1);
      b += p / static_cast<double>(k + 2);
      p *= Complex(0.0, -theta) / static_cast<double>(k + 1);
    }
    return {e0 - b, b};
  }
  const Complex e = std::exp(Complex(0.0, -theta));
  const Complex e0 = (1.0 - e) / Complex(0.0, theta);
  const Complex b = Complex(0.0, 1.0) * e / theta - (1.0 - e) / (theta * theta);
  return {e0 - b, b};
}

// int f(t) exp(-i kappa t) dt over the samples [first, last] of a uniform grid.
template <typename Value>
Complex filon(Value&& f, std::size_t first, std::size_t last, double t_first, double dt, double kappa) {
  const FilonWeights wts = filon_weights(kappa * dt);
  Complex acc = 0.0;
  for (std::size_t m = first; m < last; ++m) {
    const double t = t_first + static_cast<double>(m - first) * dt;
    acc += std::exp(Complex(0.0, -kappa * t)) * (f(m) * wts.a + f(m + 1) * wts.b);
  }
  return acc * dt;
}

inline std::string describe(StateKind kind, const SpdcSource& src, const TimeGrid& grid) {
  std::ostringstream os;
  os.precision(6);
  os << to_token(kind) << " at Te=" << s_to_fs(src.t_ent) << " fs, Tp=" << s_to_fs(src.t_pump)
     << " fs (n_sum=" << grid.n_sum << ", n_diff=" << grid.n_diff << ")";
  return os.str();
}

}  // namespace detail

/// Two-photon temporal wavefunction sampled on a TimeGrid:
///   psi(ts, ti) = (N/2) P((ts + ti)/2) G(ti - ts)
/// with P(t) = int dS E_p(S) e^{-iSt} and G(tau) = int dD g(D) e^{-iD tau/2}.
class TemporalWavefunction {
 public:
  using DiffFactor = std::function<Complex(double)>;

  TemporalWavefunction(StateKind kind, const SpdcSource& src, const TimeGrid& grid)
      : TemporalWavefunction(
            src, grid, [kind, src](double d) { return difference_factor(kind, src, d); },
            biphoton::detail::jsa_norm_constant(kind, src)) {}

  /// Custom difference factor g(D), e.g. to strip or add a walk-off phase.
  TemporalWavefunction(const SpdcSource& src, const TimeGrid& grid, const DiffFactor& g,
                       double norm_constant)
      : src_(src), grid_(grid), norm_(norm_constant) {
    src.validate();
    grid.validate(src);
    sum_ = detail::transform([&](double s) { return pump_envelope(src, s); }, grid.span_sum, grid.n_sum,
                             1.0);
    diff_ = detail::transform(g, 2.0 * grid.span_diff, grid.n_diff, 0.5);
  }

  /// hbar sqrt(ws0 wi0) / (4 pi eps0 c A)
  double field_prefactor() const {
    using C = PhysicalConstants;
    return C::hbar * std::sqrt(src_.omega_s0 * src_.omega_i0) /
           (4.0 * std::numbers::pi * C::eps0 * C::c_light * src_.area);
  }

  /// <0|E2(t2)E1(t1)|psi> + <0|E1(t2)E2(t1)|psi>, carriers included.
  Complex operator()(double t1, double t2) const {
    const double ws = src_.omega_s0;
    const double wi = src_.omega_i0;
    const Complex p = sum_.at(0.5 * (t1 + t2));
    const double tau = t2 - t1;
    const Complex direct = std::exp(Complex(0.0, -(ws * t1 + wi * t2))) * diff_.at(tau);
    const Complex swapped = std::exp(Complex(0.0, -(ws * t2 + wi * t1))) * diff_.at(-tau);
    return field_prefactor() * 0.5 * norm_ * p * (direct + swapped);
  }

  /// Largest |psi| envelope on the grid, in amplitude units.
  double envelope_max() const {
    double ps = 0.0;
    double gs = 0.0;
    for (const Complex& v : sum_.values) ps = std::max(ps, std::abs(v));
    for (const Complex& v : diff_.values) gs = std::max(gs, std::abs(v));
    return field_prefactor() * norm_ * ps * gs;
  }

  const detail::Sampled& sum_samples() const { return sum_; }
  const detail::Sampled& diff_samples() const { return diff_; }
  double norm_constant() const { return norm_; }
  const SpdcSource& source() const { return src_; }
  const TimeGrid& grid() const { return grid_; }

 private:
  SpdcSource src_;
  TimeGrid grid_;
  double norm_;
  detail::Sampled sum_;
  detail::Sampled diff_;
};

/// Field amplitude at (t1, t2), evaluated on `grid` refined once; the change
/// from `grid` itself is the error estimate, rejected above 0.5% of the
/// envelope maximum.
inline Complex temporal_amplitude(StateKind kind, const SpdcSource& src, double t1, double t2,
                                  const TimeGrid& grid) {
  const TemporalWavefunction coarse(kind, src, grid);
  const TemporalWavefunction fine(kind, src, grid.refined());
  const Complex v = fine(t1, t2);
  const double err = std::abs(v - coarse(t1, t2));
  if (err > 5e-3 * fine.envelope_max()) {
    std::ostringstream os;
    os << "temporal_amplitude: discretization error " << err / fine.envelope_max()
       << " of peak exceeds 0.5% for " << detail::describe(kind, src, grid);
    throw GridResolutionError(os.str());
  }
  return v;
}

inline Complex temporal_amplitude(StateKind kind, const SpdcSource& src, double t1, double t2) {
  return temporal_amplitude(kind, src, t1, t2, TimeGrid::for_source(kind, src));
}

/// Second-order amplitude (1/hbar^2) int dt2 int dt1 D(t1, t2) E(t1, t2) on a
/// fixed grid (no convergence control).
inline Complex tpe_amplitude(const TemporalWavefunction& psi, const EigenAcceptor& acc,
                             Ordering ordering = Ordering::causal) {
  using C = PhysicalConstants;
  const SpdcSource& src = psi.source();
  const auto& sum = psi.sum_samples();
  const auto& diff = psi.diff_samples();

  const double detuning = src.omega_s0 + src.omega_i0 - acc.omega_f;
  const Complex sum_integral =
      detail::filon([&](std::size_t m) { return sum.values[m]; }, 0, sum.n - 1, sum.time(0), sum.dt,
                    detuning);

  const std::size_t n = diff.n;
  const std::size_t first = ordering == Ordering::causal ? n / 2 : 1;
  const double delta0 = src.omega_i0 - src.omega_s0;
  auto diff_integral = [&](double wj) {
    const double kappa = 0.5 * (2.0 * wj - acc.omega_f);
    const Complex direct = detail::filon([&](std::size_t m) { return diff.values[m]; }, first, n - 1,
                                         diff.time(first), diff.dt, kappa + 0.5 * delta0);
    const Complex swapped = detail::filon([&](std::size_t m) { return diff.values[n - m]; }, first,
                                          n - 1, diff.time(first), diff.dt, kappa - 0.5 * delta0);
    return direct + swapped;
  };
  const Complex dipole = acc.pathway_alpha() * diff_integral(acc.omega_alpha) +
                         acc.pathway_beta() * diff_integral(acc.omega_beta);
  return psi.field_prefactor() / (C::hbar * C::hbar) * 0.5 * psi.norm_constant() * sum_integral * dipole;
}

struct NumericTpe {
  double probability = 0.0;
  double relative_error = 0.0;  // change under the last grid doubling
  TimeGrid grid;                // finest grid evaluated
};

/// TPE probability by quadrature, doubling both grid counts until successive
/// results agree within `tolerance` (relative).
inline NumericTpe p_tpe_numeric_detailed(StateKind kind, const EigenAcceptor& acc, const SpdcSource& src,
                                         const TimeGrid& grid, Ordering ordering = Ordering::causal,
                                         double tolerance = 1e-2) {
  grid.validate(src);
  auto evaluate = [&](const TimeGrid& g) {
    return std::norm(tpe_amplitude(TemporalWavefunction(kind, src, g), acc, ordering));
  };
  TimeGrid current = grid;
  double previous = evaluate(current);
  while (2 * std::max(current.n_sum, current.n_diff) <= TimeGrid::kMaxCount) {
    current = current.refined();
    const double next = evaluate(current);
    const double change = std::abs(next - previous);
    if (!std::isfinite(next)) break;
    if (change <= tolerance * std::abs(next)) {
      return {next, next == 0.0 ? 0.0 : change / std::abs(next), current};
    }
    previous = next;
  }
  throw NonConvergenceError("p_tpe_numeric: grid refinements disagree by more than " +
                            std::to_string(tolerance * 100.0) + "% for " +
                            detail::describe(kind, src, current));
}

inline double p_tpe_numeric(StateKind kind, const EigenAcceptor& acc, const SpdcSource& src,
                            const TimeGrid& grid, Ordering ordering = Ordering::causal) {
  return p_tpe_numeric_detailed(kind, acc, src, grid, ordering).probability;
}

inline double p_tpe_numeric(StateKind kind, const EigenAcceptor& acc, const SpdcSource& src) {
  return p_tpe_numeric(kind, acc, src, TimeGrid::for_source(kind, src));
}

}  // namespace biphoton::oracle
