#pragma once

// Parameter sweeps over (kind, J, Te), CSV/JSON output, ratio reports for the
// uncoupled panels, heatmap summaries for the coupled sweep, and the
// closed-form vs oracle comparison matrix.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "biphoton/acceptor.hpp"
#include "biphoton/constants.hpp"
#include "biphoton/oracle.hpp"
#include "biphoton/parallel.hpp"
#include "biphoton/source.hpp"
#include "biphoton/tpe.hpp"

namespace biphoton::harness {

using json = nlohmann::json;

enum class ClosedForms { literal, rederived };

inline std::string_view to_string(ClosedForms f) { return f == ClosedForms::literal ? "literal" : "rederived"; }

inline ClosedForms forms_from_string(std::string_view s) {
  if (s == "literal") return ClosedForms::literal;
  if (s == "rederived") return ClosedForms::rederived;
  throw std::invalid_argument("unknown closed-form set '" + std::string(s) + "' (expected literal|rederived)");
}

class MissingKindError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SweepSpec {
  std::string panel = "custom";
  double te_start = 0.0;                 // s
  double te_stop = fs_to_s(800.0);       // s
  double te_step = fs_to_s(0.8);         // s
  std::vector<double> j_values = {0.0};  // rad/s
  std::vector<StateKind> kinds = {kAllKinds.begin(), kAllKinds.end()};
  double lambda_a_nm = 770.0;
  double lambda_b_nm = 854.0;
  double lambda_s_nm = 810.0;
  double lambda_i_nm = 810.0;
  double t_pump = fs_to_s(350.0);  // s
  double mu_debye = 1.0;
  double area = 1e-12;  // m^2
  ResonancePolicy policy = ResonancePolicy::nominal;
  ClosedForms forms = ClosedForms::literal;

  void validate() const {
    if (!(te_step > 0.0) || !std::isfinite(te_step)) throw std::invalid_argument("SweepSpec: te_step must be positive");
    if (!(te_start >= 0.0) || !std::isfinite(te_start)) throw std::invalid_argument("SweepSpec: te_start must be >= 0");
    if (!(te_stop >= te_start) || !std::isfinite(te_stop)) {
      throw std::invalid_argument("SweepSpec: te_stop must be >= te_start");
    }
    if (j_values.empty()) throw std::invalid_argument("SweepSpec: j_values must be non-empty");
    if (kinds.empty()) throw std::invalid_argument("SweepSpec: kinds must be non-empty");
    for (double j : j_values) {
      if (!std::isfinite(j)) throw std::invalid_argument("SweepSpec: j_values must be finite");
    }
    for (double v : {lambda_a_nm, lambda_b_nm, lambda_s_nm, lambda_i_nm, t_pump, area}) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("SweepSpec: wavelengths, t_pump and area must be positive");
      }
    }
    if (!std::isfinite(mu_debye)) throw std::invalid_argument("SweepSpec: mu_debye must be finite");
  }

  /// Normalization frequency for J: mean of the source central frequencies.
  double omega0() const {
    return 0.5 * (omega_from_wavelength_nm(lambda_s_nm) + omega_from_wavelength_nm(lambda_i_nm));
  }

  std::vector<double> te_grid() const {
    const auto count = static_cast<std::size_t>(std::floor((te_stop - te_start) / te_step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = te_start + static_cast<double>(k) * te_step;
    return out;
  }

  std::vector<StateKind> sorted_kinds() const {
    std::vector<StateKind> out = kinds;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<double> sorted_j() const {
    std::vector<double> out = j_values;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  SpdcSource source(double te) const {
    return SpdcSource::from_wavelengths(lambda_s_nm, lambda_i_nm, t_pump, te, area);
  }

  EigenAcceptor acceptor(double j, const SpdcSource& src) const {
    const auto pair = AcceptorPair::from_wavelengths(lambda_a_nm, lambda_b_nm, j, mu_debye, mu_debye);
    return apply_policy(diagonalize(pair), src, policy);
  }
};

/// Fig. 2 presets: uncoupled acceptor, panels a-d.
inline SweepSpec fig2_spec(char panel) {
  SweepSpec spec;
  spec.panel = std::string("fig2") + panel;
  switch (panel) {
    case 'a': spec.lambda_a_nm = 800.0; spec.lambda_b_nm = 820.0; break;
    case 'b': spec.lambda_a_nm = 770.0; spec.lambda_b_nm = 854.0; break;
    case 'c': spec.lambda_a_nm = 740.0; spec.lambda_b_nm = 894.0; break;
    case 'd': spec.lambda_a_nm = 710.0; spec.lambda_b_nm = 942.0; break;
    default: throw std::invalid_argument(std::string("unknown panel '") + panel + "' (expected a|b|c|d)");
  }
  return spec;
}

/// Fig. 3 preset: 770/854 nm acceptor, J/w0 in [0, j_max] in `j_steps` points.
inline SweepSpec fig3_spec(double j_over_w0_max = 0.05, std::size_t j_steps = 101) {
  if (j_steps < 1) throw std::invalid_argument("fig3_spec: need at least one J value");
  SweepSpec spec;
  spec.panel = "fig3";
  spec.lambda_a_nm = 770.0;
  spec.lambda_b_nm = 854.0;
  const double w0 = spec.omega0();
  spec.j_values.clear();
  for (std::size_t k = 0; k < j_steps; ++k) {
    const double frac = j_steps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(j_steps - 1);
    spec.j_values.push_back(frac * j_over_w0_max * w0);
  }
  return spec;
}

struct SweepRow {
  double te = 0.0;  // s
  double j_over_w0 = 0.0;
  StateKind kind = StateKind::SD;
  double p = 0.0;
  bool ok = true;
  std::string error;
};

struct SweepTable {
  std::vector<SweepRow> rows;

  std::size_t failed() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok; }));
  }
};

/// Single cell; Te = 0 is the vanishing Te -> 0 limit of every closed form.
inline double evaluate_cell(const SweepSpec& spec, StateKind kind, double j, double te) {
  if (te == 0.0) return 0.0;
  const SpdcSource src = spec.source(te);
  const EigenAcceptor acc = spec.acceptor(j, src);
  return spec.forms == ClosedForms::literal ? p_tpe(kind, acc, src).probability
                                            : p_tpe_rederived(kind, acc, src).probability;
}

/// Full (kind, J, Te) cross product in lexicographic order. Cells that throw
/// are kept with ok = false and p = NaN.
inline SweepTable sweep(const SweepSpec& spec, unsigned workers = parallel::default_workers()) {
  spec.validate();
  const auto kinds = spec.sorted_kinds();
  const auto js = spec.sorted_j();
  const auto tes = spec.te_grid();
  const double w0 = spec.omega0();
  const std::size_t per_kind = js.size() * tes.size();
  const std::size_t total = kinds.size() * per_kind;

  auto cell = [&](std::size_t idx) {
    const StateKind kind = kinds[idx / per_kind];
    const double j = js[(idx % per_kind) / tes.size()];
    const double te = tes[idx % tes.size()];
    SweepRow row{te, j / w0, kind, 0.0, true, {}};
    try {
      row.p = evaluate_cell(spec, kind, j, te);
    } catch (const std::exception& e) {
      row.p = std::numeric_limits<double>::quiet_NaN();
      row.ok = false;
      row.error = e.what();
    }
    return row;
  };
  return {parallel::map_indexed<SweepRow>(total, cell, workers)};
}

/// Fixed 17-significant-digit formatting, independent of locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const SweepTable& table) {
  os << "te_fs,j_over_w0,state,p_tpe\n";
  for (const SweepRow& r : table.rows) {
    os << format_number(s_to_fs(r.te)) << ',' << format_number(r.j_over_w0) << ',' << to_token(r.kind) << ','
       << format_number(r.p) << '\n';
  }
}

struct RatioReport {
  std::map<StateKind, double> maxima;
  std::map<StateKind, double> argmax_te_fs;
  std::map<StateKind, double> quasi_uncorrelated;  // p at Te = Tp / alpha
  double si_over_gauss_max = 0.0;
  double gi_over_gd_max = 0.0;
  double sd_over_si_max = 0.0;
  std::map<StateKind, double> anticorr_over_quasiuncorr;
};

/// Ratios over the J = 0 rows of `table`. The quasi-uncorrelated reference is
/// evaluated at exactly Te = Tp / alpha, which need not lie on the grid.
inline RatioReport ratios(const SweepTable& table, const SweepSpec& spec) {
  RatioReport rep;
  for (const SweepRow& r : table.rows) {
    if (r.j_over_w0 != 0.0 || !r.ok) continue;
    auto it = rep.maxima.find(r.kind);
    if (it == rep.maxima.end() || r.p > it->second) {
      rep.maxima[r.kind] = r.p;
      rep.argmax_te_fs[r.kind] = s_to_fs(r.te);
    }
  }
  for (StateKind k : kAllKinds) {
    if (!rep.maxima.contains(k)) {
      throw MissingKindError("ratios: table has no J = 0 rows for state '" + std::string(to_token(k)) + "'");
    }
  }
  const double te_q = spec.t_pump / SpdcSource::alpha;
  for (StateKind k : kAllKinds) {
    const double q = evaluate_cell(spec, k, 0.0, te_q);
    rep.quasi_uncorrelated[k] = q;
    rep.anticorr_over_quasiuncorr[k] = rep.maxima[k] / q;
  }
  auto& m = rep.maxima;
  rep.si_over_gauss_max = m[StateKind::SI] / std::max(m[StateKind::GD], m[StateKind::GI]);
  rep.gi_over_gd_max = m[StateKind::GI] / m[StateKind::GD];
  rep.sd_over_si_max = m[StateKind::SD] / m[StateKind::SI];
  return rep;
}

struct HeatmapMax {
  double p = -1.0;
  double te_fs = 0.0;
  double j_over_w0 = 0.0;
};

/// Coupled-sweep summary: per-kind maxima, argmax Te per J value, and the
/// count of non-finite cells.
struct HeatmapSummary {
  std::map<StateKind, HeatmapMax> maxima;
  std::map<StateKind, std::vector<std::pair<double, double>>> argmax_te_by_j;  // (j/w0, te_fs)
  std::size_t non_finite = 0;

  StateKind global_max_kind() const {
    if (maxima.empty()) throw std::invalid_argument("HeatmapSummary: empty table");
    return std::max_element(maxima.begin(), maxima.end(),
                            [](const auto& a, const auto& b) { return a.second.p < b.second.p; })
        ->first;
  }
};

inline HeatmapSummary summarize_heatmap(const SweepTable& table) {
  HeatmapSummary out;
  std::map<StateKind, std::map<double, HeatmapMax>> per_j;
  for (const SweepRow& r : table.rows) {
    if (!std::isfinite(r.p)) {
      ++out.non_finite;
      continue;
    }
    HeatmapMax& g = out.maxima[r.kind];
    if (r.p > g.p) g = {r.p, s_to_fs(r.te), r.j_over_w0};
    HeatmapMax& l = per_j[r.kind][r.j_over_w0];
    if (r.p > l.p) l = {r.p, s_to_fs(r.te), r.j_over_w0};
  }
  for (const auto& [kind, by_j] : per_j) {
    auto& seq = out.argmax_te_by_j[kind];
    for (const auto& [j, mx] : by_j) seq.emplace_back(j, mx.te_fs);
  }
  return out;
}

inline json kinds_json(const std::map<StateKind, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::string(to_token(k))] = v;
  return out;
}

inline json grid_json(const SweepSpec& spec) {
  const auto js = spec.sorted_j();
  const double w0 = spec.omega0();
  json kinds = json::array();
  for (StateKind k : spec.sorted_kinds()) kinds.push_back(std::string(to_token(k)));
  return {
      {"te_start_fs", s_to_fs(spec.te_start)},
      {"te_stop_fs", s_to_fs(spec.te_stop)},
      {"te_step_fs", s_to_fs(spec.te_step)},
      {"te_count", spec.te_grid().size()},
      {"j_over_w0_min", js.front() / w0},
      {"j_over_w0_max", js.back() / w0},
      {"j_count", js.size()},
      {"kinds", kinds},
      {"lambda_a_nm", spec.lambda_a_nm},
      {"lambda_b_nm", spec.lambda_b_nm},
      {"lambda_s_nm", spec.lambda_s_nm},
      {"lambda_i_nm", spec.lambda_i_nm},
      {"t_pump_fs", s_to_fs(spec.t_pump)},
      {"mu_debye", spec.mu_debye},
      {"area_m2", spec.area},
      {"forms", std::string(to_string(spec.forms))},
  };
}

inline json report_json(const SweepSpec& spec, const RatioReport& rep) {
  return {
      {"panel", spec.panel},
      {"policy", std::string(to_string(spec.policy))},
      {"maxima", kinds_json(rep.maxima)},
      {"ratios",
       {{"si_over_gauss_max", rep.si_over_gauss_max},
        {"gi_over_gd_max", rep.gi_over_gd_max},
        {"sd_over_si_max", rep.sd_over_si_max},
        {"anticorr_over_quasiuncorr", kinds_json(rep.anticorr_over_quasiuncorr)},
        {"quasi_uncorrelated_te_fs", s_to_fs(spec.t_pump / SpdcSource::alpha)}}},
      {"argmax_te_fs", kinds_json(rep.argmax_te_fs)},
      {"grid", grid_json(spec)},
  };
}

inline json report_json(const SweepSpec& spec, const HeatmapSummary& sum) {
  json maxima = json::object();
  json argmax = json::object();
  for (const auto& [k, mx] : sum.maxima) {
    maxima[std::string(to_token(k))] = mx.p;
    argmax[std::string(to_token(k))] = {{"te_fs", mx.te_fs}, {"j_over_w0", mx.j_over_w0}};
  }
  return {
      {"panel", spec.panel},
      {"policy", std::string(to_string(spec.policy))},
      {"maxima", maxima},
      {"ratios", json::object()},
      {"argmax_te_fs", argmax},
      {"global_max_state", sum.maxima.empty() ? "" : std::string(to_token(sum.global_max_kind()))},
      {"non_finite_cells", sum.non_finite},
      {"grid", grid_json(spec)},
  };
}

/// Overrides fields of `base` from a flat JSON object whose keys mirror the
/// SweepSpec field names (SI units; kinds as state tokens). Unknown keys are
/// rejected.
inline SweepSpec spec_from_json(const json& j, SweepSpec base = {}) {
  if (!j.is_object()) throw std::invalid_argument("sweep config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "panel") base.panel = value.get<std::string>();
    else if (key == "te_start") base.te_start = value.get<double>();
    else if (key == "te_stop") base.te_stop = value.get<double>();
    else if (key == "te_step") base.te_step = value.get<double>();
    else if (key == "j_values") base.j_values = value.get<std::vector<double>>();
    else if (key == "kinds") {
      base.kinds.clear();
      for (const auto& t : value) base.kinds.push_back(kind_from_token(t.get<std::string>()));
    } else if (key == "lambda_a_nm") base.lambda_a_nm = value.get<double>();
    else if (key == "lambda_b_nm") base.lambda_b_nm = value.get<double>();
    else if (key == "lambda_s_nm") base.lambda_s_nm = value.get<double>();
    else if (key == "lambda_i_nm") base.lambda_i_nm = value.get<double>();
    else if (key == "t_pump") base.t_pump = value.get<double>();
    else if (key == "mu_debye") base.mu_debye = value.get<double>();
    else if (key == "area") base.area = value.get<double>();
    else if (key == "resonance_policy") base.policy = policy_from_string(value.get<std::string>());
    else if (key == "forms") base.forms = forms_from_string(value.get<std::string>());
    else throw std::invalid_argument("sweep config: unknown key '" + key + "'");
  }
  return base;
}

struct VerifyRow {
  StateKind kind = StateKind::SD;
  double te_fs = 0.0;
  double closed = 0.0;
  double numeric = 0.0;
  double numeric_error = 0.0;
  double deviation = 0.0;  // |closed - numeric| / numeric
};

/// Entanglement times of the comparison matrix; the first three form the
/// standard 12-point set.
inline constexpr std::array<double, 8> kVerifyTeFs = {50.0, 200.0, 600.0, 100.0, 300.0, 400.0, 500.0, 800.0};

/// Closed form vs oracle at the first `points` (te, kind) pairs, te-major,
/// for the acceptor/source of `spec` at J = 0.
inline std::vector<VerifyRow> verify_matrix(const SweepSpec& spec, std::size_t points,
                                            unsigned workers = parallel::default_workers()) {
  const std::size_t max_points = kVerifyTeFs.size() * kAllKinds.size();
  if (points < 1 || points > max_points) {
    throw std::invalid_argument("verify: --points must be in [1, " + std::to_string(max_points) + "]");
  }
  auto one = [&](std::size_t i) {
    const StateKind kind = kAllKinds[i % kAllKinds.size()];
    const double te_fs = kVerifyTeFs[i / kAllKinds.size()];
    const SpdcSource src = spec.source(fs_to_s(te_fs));
    const EigenAcceptor acc = spec.acceptor(0.0, src);
    VerifyRow row{kind, te_fs};
    row.closed = evaluate_cell(spec, kind, 0.0, src.t_ent);
    const auto num = oracle::p_tpe_numeric_detailed(kind, acc, src, oracle::TimeGrid::for_source(kind, src));
    row.numeric = num.probability;
    row.numeric_error = num.relative_error;
    row.deviation = std::abs(row.closed - row.numeric) / row.numeric;
    return row;
  };
  return parallel::map_indexed<VerifyRow>(points, one, workers);
}

}  // namespace biphoton::harness
