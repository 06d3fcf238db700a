// shockstab CLI: trace Hugoniot curves, check stability criteria at a target
// shock, sweep-audit the criteria over left-state grids, and validate system
// definitions. File-driven via a JSON config; flags override config values.
//
// Exit codes: 0 success/PASS, 1 config error, 2 numerical stall or
// unreachable target, 3 audit/validation FAIL.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shockstab.hpp"

namespace ss = shockstab;
using nlohmann::json;

namespace {

struct CliOptions {
  std::string system;
  std::string params;
  std::string config_path;
  std::string out;
  std::string format = "delimited";
  double tol_eq = -1.0;     // <0: not set
  double delta_lop = -1.0;  // <0: not set
  int jobs = 0;             // 0: not set

  // trace/check
  std::string left;
  double arclength = -1.0;
  std::string branch = "auto";
  // check targets
  double target_s = std::numeric_limits<double>::quiet_NaN();
  double target_sigma = std::numeric_limits<double>::quiet_NaN();
  std::string target_coord;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ss::ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ss::ConfigError("config file '" + path + "': " + e.what());
  }
}

ss::Params parse_params_flag(const std::string& text) {
  ss::Params out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ss::ConfigError("--params: expected key=value, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ss::ConfigError("--params: bad numeric value in '" + item + "'");
    }
  }
  return out;
}

ss::Vec parse_state_flag(const std::string& text) {
  std::vector<double> vals;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ss::ConfigError("--left: bad numeric value '" + item + "'");
    }
  }
  ss::Vec u(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) u[static_cast<Eigen::Index>(i)] = vals[i];
  return u;
}

ss::SystemModel build_model(const CliOptions& opt, const json& cfg, std::string* catalog_name) {
  const bool flag_source = !opt.system.empty();
  const bool cfg_source = cfg.contains("system");
  if (flag_source && cfg_source)
    throw ss::ConfigError("exactly one system source: config already defines 'system', "
                          "drop --system");
  if (!flag_source && !cfg_source)
    throw ss::ConfigError("no system source: pass --system <name> or a config with 'system'");

  if (flag_source) {
    if (catalog_name) *catalog_name = opt.system;
    return ss::catalog_lookup(opt.system, parse_params_flag(opt.params));
  }
  const json& sys = cfg["system"];
  if (sys.contains("catalog")) {
    ss::Params params;
    if (sys.contains("params"))
      for (const auto& [key, value] : sys["params"].items()) params[key] = value.get<double>();
    for (const auto& [key, value] : parse_params_flag(opt.params)) params[key] = value;
    if (catalog_name) *catalog_name = sys["catalog"].get<std::string>();
    return ss::catalog_lookup(sys["catalog"].get<std::string>(), params);
  }
  if (sys.contains("expressions")) return ss::expr::build_system(sys["expressions"]);
  throw ss::ConfigError("config 'system' must contain 'catalog' or 'expressions'");
}

ss::TolerancePolicy tolerances_from(const CliOptions& opt, const json& cfg) {
  ss::TolerancePolicy pol;
  if (cfg.contains("tolerances")) {
    const json& t = cfg["tolerances"];
    pol.eps_eq = t.value("eps_eq", pol.eps_eq);
    pol.delta_lop = t.value("delta_lop", pol.delta_lop);
  }
  if (opt.tol_eq > 0.0) pol.eps_eq = opt.tol_eq;
  if (opt.delta_lop > 0.0) pol.delta_lop = opt.delta_lop;
  pol.validate();
  return pol;
}

ss::ContinuationConfig continuation_from(const CliOptions& opt, const json& cfg) {
  ss::ContinuationConfig c;
  if (cfg.contains("continuation")) {
    const json& j = cfg["continuation"];
    c.h0 = j.value("h0", c.h0);
    c.h_min = j.value("h_min", c.h_min);
    c.h_max = j.value("h_max", c.h_max);
    c.tol_rh = j.value("tol_rh", c.tol_rh);
    c.max_arclength = j.value("max_arclength", c.max_arclength);
    c.max_newton_iters = j.value("max_newton_iters", c.max_newton_iters);
    c.stop_on_lax_loss = j.value("stop_on_lax_loss", c.stop_on_lax_loss);
  }
  if (opt.arclength > 0.0) c.max_arclength = opt.arclength;
  c.validate();
  return c;
}

ss::Vec left_state_from(const CliOptions& opt, const json& cfg, const char* section) {
  if (!opt.left.empty()) return parse_state_flag(opt.left);
  if (cfg.contains(section) && cfg[section].contains("left_state")) {
    const json& a = cfg[section]["left_state"];
    ss::Vec u(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      u[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return u;
  }
  throw ss::ConfigError(std::string(section) +
                        ": missing required 'left_state' (--left or config " + section +
                        ".left_state)");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ss::ConfigError("cannot open output file '" + path + "'");
  return out;
}

void write_meta_sidecar(const std::string& out_path, const std::string& command) {
  if (out_path.empty()) return;
  std::ofstream meta(out_path + ".meta.json");
  if (!meta) return;
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%FT%TZ", std::gmtime(&now));
  ss::OJson j;
  j["tool"] = "shockstab";
  j["command"] = command;
  j["written_at"] = stamp;  // timestamps live only here
  meta << j.dump(2) << "\n";
}

int cmd_trace(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const ss::SystemModel model = build_model(opt, cfg, nullptr);
  const ss::ContinuationConfig cc = continuation_from(opt, cfg);
  const ss::Vec u = left_state_from(opt, cfg, "trace");
  model.require_admissible(u, "trace");

  std::string branch = opt.branch;
  if (cfg.contains("trace")) branch = cfg["trace"].value("branch", branch);
  if (!opt.branch.empty() && opt.branch != "auto") branch = opt.branch;

  std::vector<ss::HugoniotCurve> curves;
  if (branch == "auto") {
    curves = ss::trace_curves(model, u, cc);
  } else if (branch == "shock" || branch == "expansion") {
    curves.push_back(ss::trace_curve(model, u, cc,
                                     branch == "shock" ? ss::Branch::Shock
                                                       : ss::Branch::Expansion));
  } else {
    throw ss::ConfigError("trace: branch must be auto, shock, or expansion");
  }

  auto emit = [&](const ss::HugoniotCurve& curve, std::ostream& os) {
    if (opt.format == "structured")
      ss::write_curve_jsonl(os, curve);
    else if (opt.format == "delimited")
      ss::write_curve_delimited(os, curve);
    else
      throw ss::ConfigError("--format must be 'delimited' or 'structured'");
  };

  if (opt.out.empty()) {
    emit(curves[0], std::cout);
  } else {
    auto os = open_output(opt.out);
    emit(curves[0], os);
    write_meta_sidecar(opt.out, "trace");
    if (curves.size() > 1) {
      auto alt = open_output(opt.out + ".alt");
      emit(curves[1], alt);
      std::cerr << "note: seed not genuinely nonlinear; second branch written to "
                << opt.out + ".alt" << "\n";
    }
  }
  std::cerr << "traced " << curves[0].points.size() << " points, stop: "
            << ss::to_string(curves[0].stop_reason)
            << (curves[0].stop_detail.empty() ? "" : " (" + curves[0].stop_detail + ")")
            << "\n";
  const bool stalled = curves[0].stop_reason == ss::StopReason::Stalled ||
                       curves[0].stop_reason == ss::StopReason::RankDeficient ||
                       curves[0].stop_reason == ss::StopReason::HyperbolicityLoss;
  return stalled ? 2 : 0;
}

const char* mark(bool ok) { return ok ? "PASS" : "FAIL"; }

int cmd_check(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const ss::SystemModel model = build_model(opt, cfg, nullptr);
  const ss::ContinuationConfig cc = continuation_from(opt, cfg);
  const ss::TolerancePolicy pol = tolerances_from(opt, cfg);
  const ss::Vec u = left_state_from(opt, cfg, "check");
  model.require_admissible(u, "check");

  // target selector: arclength value, target sigma, or target state coordinate
  std::string kind;
  double value = 0.0;
  int coord_index = 0;
  if (!std::isnan(opt.target_s)) {
    kind = "arclength";
    value = opt.target_s;
  } else if (!std::isnan(opt.target_sigma)) {
    kind = "sigma";
    value = opt.target_sigma;
  } else if (!opt.target_coord.empty()) {
    const auto colon = opt.target_coord.find(':');
    if (colon == std::string::npos)
      throw ss::ConfigError("--target-coord: expected index:value (1-based index)");
    kind = "coordinate";
    coord_index = std::stoi(opt.target_coord.substr(0, colon)) - 1;
    value = std::stod(opt.target_coord.substr(colon + 1));
  } else if (cfg.contains("check") && cfg["check"].contains("target")) {
    const json& t = cfg["check"]["target"];
    kind = t.at("type").get<std::string>();
    value = t.at("value").get<double>();
    coord_index = t.value("index", 1) - 1;
  } else {
    throw ss::ConfigError("check: missing target (--target-s, --target-sigma, "
                          "--target-coord, or config check.target)");
  }
  if (coord_index < 0 || coord_index >= model.n)
    throw ss::ConfigError("check: coordinate index out of range");

  ss::HugoniotCurve curve = ss::trace_curve(model, u, cc);

  ss::HugoniotPoint plus;
  if (kind == "arclength") {
    plus = ss::point_at(model, curve, value);
  } else if (kind == "sigma") {
    plus = ss::locate_parameter(model, curve,
                                [&](const ss::HugoniotPoint& p) { return p.sigma - value; });
  } else if (kind == "coordinate") {
    plus = ss::locate_parameter(model, curve, [&](const ss::HugoniotPoint& p) {
      return p.state[coord_index] - value;
    });
  } else {
    throw ss::ConfigError("check: target type must be arclength, sigma, or coordinate");
  }

  std::cout << "system: " << model.name << "\n";
  std::cout << "left state: " << ss::format_state(u) << "\n";
  std::cout << "s_+ = " << plus.s << ", S = " << ss::format_state(plus.state)
            << ", sigma = " << plus.sigma << "\n";

  if (!(plus.s > 0.0)) {
    std::cout << "lopatinski: degenerate: zero-amplitude shock\n";
    std::cout << "(i')  sigma' <= 0 at s_+:      PASS (margin 0, vacuous)\n";
    std::cout << "(ii') d_s eta >= 0 at s_+:     PASS (margin 0, vacuous)\n";
    return 0;
  }

  const ss::ConditionReport report = ss::evaluate_point(model, u, plus, pol);
  const ss::LvFlags lv = ss::lv_conditions(model, u, curve, plus.s, pol);

  std::ostringstream lines;
  lines.precision(12);
  lines << "Lax 1-shock margins:           " << mark(report.flags.lax) << " (min "
        << report.lax_margins.minCoeff() << ")\n";
  lines << "Lopatinski |det| > " << pol.delta_lop << ":     " << mark(report.flags.lopatinski)
        << " (det " << report.lopatinski_det << ")\n";
  lines << "(i)   sigma' <= 0 on [0,s_+]:  " << mark(lv.i.pass) << " (worst "
        << lv.i.margin << " at s=" << lv.i.at_s << ")\n";
  lines << "(ii)  d_s eta >= 0 on [0,s_+]: " << mark(lv.ii.pass) << " (worst "
        << lv.ii.margin << " at s=" << lv.ii.at_s << ")\n";
  lines << "(i')  sigma'(s_+) <= 0:        " << mark(lv.i_prime.pass) << " ("
        << lv.i_prime.margin << ")\n";
  lines << "(ii') d_s eta(s_+) >= 0:       " << mark(lv.ii_prime.pass) << " ("
        << lv.ii_prime.margin << ")\n";
  lines << "(ii*) weakened form:           " << mark(lv.ii_star.pass) << " (worst "
        << lv.ii_star.margin << " at s=" << lv.ii_star.at_s << ")\n";
  if (report.dissipation)
    lines << "dissipation [q]-sigma[eta]:    " << *report.dissipation << " ("
          << (*report.flags.dissipative ? "dissipative" : "NOT dissipative") << ")\n";
  else
    lines << "dissipation:                   unavailable (no entropy flux)\n";
  lines << "relative entropy eta(u|S):     " << report.rel_entropy << "\n";
  std::cout << lines.str();

  if (!opt.out.empty()) {
    auto os = open_output(opt.out);
    os << ss::to_json(report).dump(2) << "\n";
    auto prof = open_output(opt.out + ".profile.tsv");
    const std::vector<ss::ConditionReport> profile = ss::evaluate_profile(model, curve, 1, pol);
    std::vector<ss::ConditionReport> upto;
    for (const ss::ConditionReport& r : profile)
      if (r.point.s <= plus.s * (1.0 + 1e-12)) upto.push_back(r);
    ss::write_profile_delimited(prof, upto);
    write_meta_sidecar(opt.out, "check");
  }
  return 0;
}

int cmd_audit(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  std::string catalog_name;
  const ss::SystemModel model = build_model(opt, cfg, &catalog_name);
  const ss::TolerancePolicy pol = tolerances_from(opt, cfg);

  ss::SweepSpec spec;
  if (cfg.contains("audit") && cfg["audit"].contains("left_grid")) {
    for (const auto& axis : cfg["audit"]["left_grid"])
      spec.left_grid.push_back({axis.at("min").get<double>(), axis.at("max").get<double>(),
                                axis.at("count").get<int>()});
    spec.continuation.max_arclength = 2.0;
    spec.continuation.h_max = 0.03;
  } else if (!catalog_name.empty()) {
    spec = ss::default_sweep(catalog_name);
  } else {
    throw ss::ConfigError("audit: expression-defined systems need an explicit "
                          "audit.left_grid in the config");
  }
  if (cfg.contains("continuation")) spec.continuation = continuation_from(opt, cfg);
  if (opt.arclength > 0.0) spec.continuation.max_arclength = opt.arclength;
  spec.tolerances = pol;
  if (cfg.contains("audit")) {
    spec.sample_stride = cfg["audit"].value("sample_stride", spec.sample_stride);
    spec.jobs = cfg["audit"].value("jobs", spec.jobs);
  }
  if (opt.jobs > 0) spec.jobs = opt.jobs;

  const ss::AuditResult result = ss::run_audit(model, spec);
  const ss::Verdict verdict = ss::implication_check(result);

  long inadmissible = 0;
  for (const auto& sa : result.states)
    if (sa.status == "inadmissible") ++inadmissible;
  if (inadmissible == result.tallies.states_total && inadmissible > 0)
    std::cerr << "warning: every left state in the grid is inadmissible\n";

  std::cout << verdict.summary << "\n";
  std::cout << "states traced: " << result.tallies.states_traced << "/"
            << result.tallies.states_total << ", samples: " << result.tallies.samples
            << ", hypothesis points: " << result.tallies.hypothesis_points << "\n";
  std::cout << "dissipation checked/ok: " << result.tallies.dissipation_checked << "/"
            << result.tallies.dissipation_ok
            << ", openness probe (stable but (i') or (ii') fails): "
            << result.tallies.openness_points << "\n";

  if (!opt.out.empty()) {
    auto os = open_output(opt.out);
    os << ss::to_json(result).dump(2) << "\n";
    auto table = open_output(opt.out + ".table.tsv");
    ss::write_audit_table(table, result);
    write_meta_sidecar(opt.out, "audit");
  }
  return verdict.pass ? 0 : 3;
}

int cmd_validate(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  std::string catalog_name;
  const ss::SystemModel model = build_model(opt, cfg, &catalog_name);

  std::vector<ss::Vec> samples;
  if (cfg.contains("validate") && cfg["validate"].contains("samples")) {
    for (const auto& row : cfg["validate"]["samples"]) {
      ss::Vec u(row.size());
      for (std::size_t i = 0; i < row.size(); ++i)
        u[static_cast<Eigen::Index>(i)] = row[i].get<double>();
      samples.push_back(std::move(u));
    }
  } else if (!catalog_name.empty()) {
    samples = ss::standard_samples(catalog_name);
  } else {
    throw ss::ConfigError("validate: expression-defined systems need explicit "
                          "validate.samples in the config");
  }

  const ss::ValidationReport report = ss::validate_system(model, samples);
  for (const ss::SampleValidation& sv : report.samples) {
    std::cout << (sv.pass ? "PASS " : "FAIL ") << ss::format_state(sv.state)
              << "  P_asym=" << sv.p_asymmetry << " PA_asym=" << sv.pa_asymmetry
              << " dflux=" << sv.flux_jacobian_error;
    if (!sv.pass) std::cout << "  [" << sv.failure << "]";
    std::cout << "\n";
  }
  std::cout << (report.pass ? "PASS" : "FAIL") << ": " << report.samples.size()
            << " samples\n";
  if (!opt.out.empty()) {
    auto os = open_output(opt.out);
    os << ss::to_json(report).dump(2) << "\n";
    write_meta_sidecar(opt.out, "validate");
  }
  return report.pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hugoniot curves and shock stability criteria for conservation laws"};
  app.require_subcommand(1);
  CliOptions opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--system", opt.system, "catalog system name");
    sub->add_option("--params", opt.params, "catalog parameters, e.g. k=1,gamma=2");
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--out", opt.out, "output file path");
    sub->add_option("--format", opt.format, "delimited|structured");
    sub->add_option("--tol-eq", opt.tol_eq, "band for nonstrict inequalities");
    sub->add_option("--delta-lop", opt.delta_lop, "Lopatinski degeneracy threshold");
    sub->add_option("--jobs", opt.jobs, "parallel workers for sweeps");
  };

  CLI::App* trace = app.add_subcommand("trace", "trace the 1-Hugoniot curve");
  add_common(trace);
  trace->add_option("--left", opt.left, "left state, comma separated");
  trace->add_option("--arclength", opt.arclength, "stop at this pseudo-arclength");
  trace->add_option("--branch", opt.branch, "auto|shock|expansion");

  CLI::App* check = app.add_subcommand("check", "evaluate criteria at a target shock");
  add_common(check);
  check->add_option("--left", opt.left, "left state, comma separated");
  check->add_option("--arclength", opt.arclength, "trace this far before locating");
  check->add_option("--target-s", opt.target_s, "target arclength s_+");
  check->add_option("--target-sigma", opt.target_sigma, "target shock speed");
  check->add_option("--target-coord", opt.target_coord,
                    "target state coordinate as index:value (1-based)");

  CLI::App* audit = app.add_subcommand("audit", "sweep left states and audit criteria");
  add_common(audit);
  audit->add_option("--arclength", opt.arclength, "curve length per left state");

  CLI::App* validate = app.add_subcommand("validate", "check entropy/flux structure");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (trace->parsed()) return cmd_trace(opt);
    if (check->parsed()) return cmd_check(opt);
    if (audit->parsed()) return cmd_audit(opt);
    if (validate->parsed()) return cmd_validate(opt);
  } catch (const ss::ContinuationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ss::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
