#pragma once

// Command-line front end: point, sweep, fig2, fig3, verify.
// Exit codes: 0 success, 1 usage error, 2 numerical failure (including a
// verify point outside tolerance).

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "biphoton/harness.hpp"
#include "biphoton/oracle.hpp"
#include "biphoton/specfun.hpp"
#include "biphoton/tpe.hpp"

namespace biphoton::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2 };

inline constexpr double kVerifyTolerance = 0.02;

namespace detail {

struct CommonOptions {
  std::string policy;
  bool enforce = false;
  std::string forms = "literal";

  void attach(CLI::App* cmd, const std::string& default_policy) {
    policy = default_policy;
    cmd->add_option("--policy", policy, "Resonance policy")
        ->check(CLI::IsMember({"nominal", "enforced"}))
        ->capture_default_str();
    cmd->add_flag("--enforce-resonance", enforce, "Shorthand for --policy enforced");
    cmd->add_option("--forms", forms, "Closed-form set")
        ->check(CLI::IsMember({"literal", "rederived"}))
        ->capture_default_str();
  }

  void apply(harness::SweepSpec& spec) const {
    spec.policy = enforce ? ResonancePolicy::enforced : policy_from_string(policy);
    spec.forms = harness::forms_from_string(forms);
  }
};

struct PhysicsOptions {
  double lambda_a = 770.0;
  double lambda_b = 854.0;
  double lambda_s = 810.0;
  double lambda_i = 810.0;
  double tp_fs = 350.0;
  double mu = 1.0;
  double area_um2 = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda-a-nm", lambda_a, "Acceptor a wavelength (nm)")->capture_default_str();
    cmd->add_option("--lambda-b-nm", lambda_b, "Acceptor b wavelength (nm)")->capture_default_str();
    cmd->add_option("--lambda-s-nm", lambda_s, "Signal central wavelength (nm)")->capture_default_str();
    cmd->add_option("--lambda-i-nm", lambda_i, "Idler central wavelength (nm)")->capture_default_str();
    cmd->add_option("--tp-fs", tp_fs, "Pump duration (fs)")->capture_default_str();
    cmd->add_option("--mu-debye", mu, "Bare transition dipoles (D)")->capture_default_str();
    cmd->add_option("--area-um2", area_um2, "Effective field area (um^2)")->capture_default_str();
  }

  // Only options given explicitly override `spec`.
  void apply(CLI::App* cmd, harness::SweepSpec& spec) const {
    if (cmd->count("--lambda-a-nm")) spec.lambda_a_nm = lambda_a;
    if (cmd->count("--lambda-b-nm")) spec.lambda_b_nm = lambda_b;
    if (cmd->count("--lambda-s-nm")) spec.lambda_s_nm = lambda_s;
    if (cmd->count("--lambda-i-nm")) spec.lambda_i_nm = lambda_i;
    if (cmd->count("--tp-fs")) spec.t_pump = fs_to_s(tp_fs);
    if (cmd->count("--mu-debye")) spec.mu_debye = mu;
    if (cmd->count("--area-um2")) spec.area = area_um2 * 1e-12;
  }
};

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

inline std::string csv_text(const harness::SweepTable& table) {
  std::ostringstream os;
  harness::write_csv(os, table);
  return os.str();
}

inline std::string default_report_path(const std::string& csv_path) {
  if (csv_path.empty() || csv_path == "-") return "";
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? csv_path.substr(0, dot) : csv_path) + ".json";
}

inline int report_failures(const harness::SweepTable& table, std::ostream& err) {
  const std::size_t failed = table.failed();
  if (failed == 0) return kOk;
  for (const auto& r : table.rows) {
    if (!r.ok) {
      err << "cell failed: state=" << to_token(r.kind) << " te_fs=" << s_to_fs(r.te)
          << " j_over_w0=" << r.j_over_w0 << ": " << r.error << "\n";
      break;
    }
  }
  err << failed << " of " << table.rows.size() << " cells failed\n";
  return kNumeric;
}

inline std::string specfun_table() {
  std::ostringstream os;
  os << "x,erfi,faddeeva_re,faddeeva_im,f_minus_re,f_minus_im,f_plus_re,f_plus_im\n";
  for (int k = -100; k <= 100; ++k) {
    const double x = 0.25 * k;
    const auto w = specfun::faddeeva(x);
    const auto fm = specfun::f_pm(x, specfun::Branch::minus);
    const auto fp = specfun::f_pm(x, specfun::Branch::plus);
    const double e = std::abs(x) <= 26.0 ? specfun::erfi(x) : std::nan("");
    os << harness::format_number(x) << ',' << harness::format_number(e) << ','
       << harness::format_number(w.real()) << ',' << harness::format_number(w.imag()) << ','
       << harness::format_number(fm.real()) << ',' << harness::format_number(fm.imag()) << ','
       << harness::format_number(fp.real()) << ',' << harness::format_number(fp.imag()) << '\n';
  }
  return os.str();
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Two-photon excitation of a two-particle acceptor by SPDC photon pairs"};
  app.require_subcommand(1);

  // point
  auto* point = app.add_subcommand("point", "Single closed-form probability as JSON");
  std::string point_state;
  double point_te_fs = 0.0;
  double point_j = 0.0;
  detail::PhysicsOptions point_phys;
  detail::CommonOptions point_common;
  point->add_option("--state", point_state, "sd|si|gd|gi")->required()->check(CLI::IsMember({"sd", "si", "gd", "gi"}));
  point->add_option("--te-fs", point_te_fs, "Entanglement time (fs)")->required();
  point->add_option("--j", point_j, "Coupling J in units of w0")->capture_default_str();
  point_phys.attach(point);
  point_common.attach(point, "nominal");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Closed-form sweep over (state, J, Te) to CSV");
  std::string sweep_config;
  std::string sweep_out;
  double te_start_fs = 0.0, te_stop_fs = 800.0, te_step_fs = 0.8;
  double j_max = 0.0;
  std::size_t j_steps = 1;
  std::vector<std::string> sweep_states;
  detail::PhysicsOptions sweep_phys;
  detail::CommonOptions sweep_common;
  sweep_cmd->add_option("--config", sweep_config, "Flat JSON file with SweepSpec fields")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "CSV path (default stdout)");
  sweep_cmd->add_option("--te-start-fs", te_start_fs)->capture_default_str();
  sweep_cmd->add_option("--te-stop-fs", te_stop_fs)->capture_default_str();
  sweep_cmd->add_option("--te-step-fs", te_step_fs)->capture_default_str();
  sweep_cmd->add_option("--j-max", j_max, "Largest J in units of w0")->capture_default_str();
  sweep_cmd->add_option("--j-steps", j_steps, "Number of J values in [0, j-max]")->capture_default_str();
  sweep_cmd->add_option("--states", sweep_states, "Subset of sd si gd gi")
      ->check(CLI::IsMember({"sd", "si", "gd", "gi"}));
  sweep_phys.attach(sweep_cmd);
  sweep_common.attach(sweep_cmd, "nominal");

  // fig2
  auto* fig2 = app.add_subcommand("fig2", "Uncoupled-acceptor preset (CSV + ratio report)");
  std::string panel;
  std::string fig2_out, fig2_report;
  detail::CommonOptions fig2_common;
  fig2->add_option("--panel", panel, "a|b|c|d")->required()->check(CLI::IsMember({"a", "b", "c", "d"}));
  fig2->add_option("--out", fig2_out, "CSV path (default stdout)");
  fig2->add_option("--report", fig2_report, "JSON report path (default: CSV path with .json)");
  fig2_common.attach(fig2, "nominal");

  // fig3
  auto* fig3 = app.add_subcommand("fig3", "Coupled-acceptor (Te, J) preset (CSV + summary report)");
  std::string fig3_out, fig3_report;
  double fig3_j_max = 0.05;
  std::size_t fig3_j_steps = 101;
  detail::CommonOptions fig3_common;
  fig3->add_option("--out", fig3_out, "CSV path (default stdout)");
  fig3->add_option("--report", fig3_report, "JSON report path (default: CSV path with .json)");
  fig3->add_option("--j-max", fig3_j_max, "Largest J in units of w0")->capture_default_str();
  fig3->add_option("--j-steps", fig3_j_steps, "Number of J values")->capture_default_str();
  fig3_common.attach(fig3, "nominal");

  // verify
  auto* verify = app.add_subcommand("verify", "Closed forms vs time-domain oracle");
  std::size_t verify_points = 12;
  std::string verify_out;
  detail::PhysicsOptions verify_phys;
  detail::CommonOptions verify_common;
  verify->add_option("--points", verify_points, "Number of (Te, state) points")->capture_default_str();
  verify->add_option("--out", verify_out, "Comparison CSV path (default stdout)");
  verify_phys.attach(verify);
  verify_common.attach(verify, "enforced");

  auto* table_cmd = app.add_subcommand("specfun-table", "Special-function values on a grid");
  table_cmd->group("");
  std::string table_out;
  table_cmd->add_option("--out", table_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (point->parsed()) {
      harness::SweepSpec spec;
      point_phys.apply(point, spec);
      point_common.apply(spec);
      const StateKind kind = kind_from_token(point_state);
      const SpdcSource src = spec.source(fs_to_s(point_te_fs));
      src.validate();
      const double j = point_j * spec.omega0();
      const EigenAcceptor acc = spec.acceptor(j, src);
      const double p = harness::evaluate_cell(spec, kind, j, src.t_ent);
      const json doc = {
          {"state", point_state},
          {"p_tpe", p},
          {"te_fs", point_te_fs},
          {"tp_fs", s_to_fs(spec.t_pump)},
          {"j_over_w0", point_j},
          {"lambda_a_nm", spec.lambda_a_nm},
          {"lambda_b_nm", spec.lambda_b_nm},
          {"lambda_s_nm", spec.lambda_s_nm},
          {"lambda_i_nm", spec.lambda_i_nm},
          {"mu_debye", spec.mu_debye},
          {"area_m2", spec.area},
          {"policy", std::string(to_string(spec.policy))},
          {"forms", std::string(to_string(spec.forms))},
          {"omega_alpha", acc.omega_alpha},
          {"omega_beta", acc.omega_beta},
          {"omega_f", acc.omega_f},
          {"theta", acc.theta},
          {"regime", std::string(to_string(classify(src)))},
      };
      out << doc.dump(2) << "\n";
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      harness::SweepSpec spec;
      if (!sweep_config.empty()) {
        std::ifstream f(sweep_config);
        json cfg;
        try {
          cfg = json::parse(f);
        } catch (const json::exception& e) {
          throw std::invalid_argument("cannot parse config '" + sweep_config + "': " + e.what());
        }
        spec = harness::spec_from_json(cfg, spec);
      }
      if (sweep_cmd->count("--te-start-fs")) spec.te_start = fs_to_s(te_start_fs);
      if (sweep_cmd->count("--te-stop-fs")) spec.te_stop = fs_to_s(te_stop_fs);
      if (sweep_cmd->count("--te-step-fs")) spec.te_step = fs_to_s(te_step_fs);
      sweep_phys.apply(sweep_cmd, spec);
      if (sweep_cmd->count("--j-max") || sweep_cmd->count("--j-steps")) {
        if (j_steps < 1) throw std::invalid_argument("--j-steps must be >= 1");
        spec.j_values.clear();
        for (std::size_t k = 0; k < j_steps; ++k) {
          const double frac = j_steps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(j_steps - 1);
          spec.j_values.push_back(frac * j_max * spec.omega0());
        }
      }
      if (!sweep_states.empty()) {
        spec.kinds.clear();
        for (const auto& t : sweep_states) spec.kinds.push_back(kind_from_token(t));
      }
      if (sweep_cmd->count("--policy") || sweep_cmd->count("--enforce-resonance") || sweep_config.empty()) {
        spec.policy = sweep_common.enforce ? ResonancePolicy::enforced : policy_from_string(sweep_common.policy);
      }
      if (sweep_cmd->count("--forms") || sweep_config.empty()) spec.forms = harness::forms_from_string(sweep_common.forms);
      const auto table = harness::sweep(spec);
      detail::write_text(sweep_out, detail::csv_text(table), out);
      return detail::report_failures(table, err);
    }

    if (fig2->parsed()) {
      harness::SweepSpec spec = harness::fig2_spec(panel.front());
      fig2_common.apply(spec);
      const auto table = harness::sweep(spec);
      detail::write_text(fig2_out, detail::csv_text(table), out);
      const int status = detail::report_failures(table, err);
      const auto rep = harness::ratios(table, spec);
      const std::string report = harness::report_json(spec, rep).dump(2) + "\n";
      const std::string report_path = fig2_report.empty() ? detail::default_report_path(fig2_out) : fig2_report;
      detail::write_text(report_path, report, report_path.empty() ? err : out);
      return status;
    }

    if (fig3->parsed()) {
      harness::SweepSpec spec = harness::fig3_spec(fig3_j_max, fig3_j_steps);
      fig3_common.apply(spec);
      const auto table = harness::sweep(spec);
      detail::write_text(fig3_out, detail::csv_text(table), out);
      const int status = detail::report_failures(table, err);
      const auto summary = harness::summarize_heatmap(table);
      const std::string report = harness::report_json(spec, summary).dump(2) + "\n";
      const std::string report_path = fig3_report.empty() ? detail::default_report_path(fig3_out) : fig3_report;
      detail::write_text(report_path, report, report_path.empty() ? err : out);
      return status;
    }

    if (verify->parsed()) {
      harness::SweepSpec spec = harness::fig2_spec('b');
      verify_phys.apply(verify, spec);
      verify_common.apply(spec);
      const auto rows = harness::verify_matrix(spec, verify_points);
      std::ostringstream os;
      os << "state,te_fs,closed_form,oracle,oracle_rel_error,rel_deviation,pass\n";
      double worst = 0.0;
      for (const auto& r : rows) {
        const bool pass = r.deviation <= kVerifyTolerance;
        worst = std::max(worst, r.deviation);
        os << to_token(r.kind) << ',' << harness::format_number(r.te_fs) << ','
           << harness::format_number(r.closed) << ',' << harness::format_number(r.numeric) << ','
           << harness::format_number(r.numeric_error) << ',' << harness::format_number(r.deviation) << ','
           << (pass ? "yes" : "no") << '\n';
      }
      detail::write_text(verify_out, os.str(), out);
      err << "verify: policy=" << to_string(spec.policy) << " forms=" << to_string(spec.forms)
          << " max relative deviation " << worst << "\n";
      return worst <= kVerifyTolerance ? kOk : kNumeric;
    }

    if (table_cmd->parsed()) {
      detail::write_text(table_out, detail::specfun_table(), out);
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}

}  // namespace biphoton::cli
