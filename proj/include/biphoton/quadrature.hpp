#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for real or complex integrands.
//
// The rule is templated on the real type so that test-side oracles can run in
// long double while production code stays in double.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace biphoton::quad {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename V>
struct Result {
  V value{};
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  int max_intervals = 20000;
};

namespace detail {

template <typename R>
struct Kronrod15 {
  // QUADPACK qk15 abscissae and weights. Odd indices are the Gauss-7 nodes.
  static constexpr std::array<long double, 8> xgk = {
      0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
      0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
      0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
      0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
  static constexpr std::array<long double, 8> wgk = {
      0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
      0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
      0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
      0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
  static constexpr std::array<long double, 4> wg = {
      0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
      0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};
};

template <typename V>
double magnitude(const V& v) {
  return static_cast<double>(std::abs(v));
}

template <typename R, typename V>
struct Segment {
  R a, b;
  V value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename R, typename V, typename F>
Segment<R, V> apply_rule(F& f, R a, R b) {
  using K = Kronrod15<R>;
  const R center = (a + b) / 2;
  const R half = (b - a) / 2;
  const V fc = f(center);
  V kronrod = fc * static_cast<R>(K::wgk[7]);
  V gauss = fc * static_cast<R>(K::wg[3]);
  for (int j = 0; j < 7; ++j) {
    const R dx = half * static_cast<R>(K::xgk[j]);
    const V f1 = f(center - dx);
    const V f2 = f(center + dx);
    kronrod += (f1 + f2) * static_cast<R>(K::wgk[j]);
    if (j % 2 == 1) gauss += (f1 + f2) * static_cast<R>(K::wg[j / 2]);
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

/// Integrates `f` over [a, b] by globally adaptive bisection of the interval
/// with the largest error estimate. Throws QuadratureError if the tolerance
/// max(abs_tol, rel_tol*|I|) is not reached within `max_intervals`.
template <typename R = double, typename F>
auto integrate(F&& f, R a, R b, const Options& opt = {}) {
  using V = std::decay_t<decltype(f(a))>;
  using Seg = detail::Segment<R, V>;
  std::priority_queue<Seg> heap;
  Seg first = detail::apply_rule<R, V>(f, a, b);
  V total = first.value;
  double err = first.error;
  heap.push(first);
  int intervals = 1;
  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total)); };
  while (err > tolerance()) {
    if (intervals >= opt.max_intervals) {
      throw QuadratureError("adaptive quadrature did not converge: error estimate " +
                            std::to_string(err) + " after " + std::to_string(intervals) +
                            " intervals");
    }
    Seg worst = heap.top();
    heap.pop();
    const R mid = (worst.a + worst.b) / 2;
    Seg left = detail::apply_rule<R, V>(f, worst.a, mid);
    Seg right = detail::apply_rule<R, V>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift accumulated by the incremental updates.
  V sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  return Result<V>{sum, esum, intervals};
}

/// Integrates over consecutive panels [edges[k], edges[k+1]] and sums. Useful
/// for oscillatory integrands where panel edges follow the oscillation.
template <typename R = double, typename F>
auto integrate_panels(F&& f, const std::vector<R>& edges, const Options& opt = {}) {
  using V = std::decay_t<decltype(f(edges.front()))>;
  Result<V> out;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    auto r = integrate<R>(f, edges[k], edges[k + 1], opt);
    out.value += r.value;
    out.error += r.error;
    out.intervals += r.intervals;
  }
  return out;
}

}  // namespace biphoton::quad
