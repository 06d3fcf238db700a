// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Tolerances are pinned here as literals.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expr_corpus.hpp"
#include "helpers.hpp"
#include "shockstab.hpp"

using namespace shockstab;
namespace ex = shockstab::expr;
namespace fs = std::filesystem;

namespace {

struct Harness {
  int failures = 0;

  void criterion(int n, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(),
                detail.c_str());
    if (!ok) ++failures;
  }
};

struct NamedAudit {
  std::string label;
  SystemModel model;
  AuditResult result;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Vec canonical_left(const std::string& name) {
  if (name == "burgers") return Vec::Constant(1, 1.0);
  if (name == "p_system") {
    Vec u(2);
    u << 1.0, 0.0;
    return u;
  }
  if (name == "euler_ideal") {
    Vec u(3);
    u << 1.0, 0.0, 2.5;
    return u;
  }
  Vec u(2);
  u << 1.0, 0.0;
  return u;  // shallow_water
}

// ---------------------------------------------------------------------------
// criterion 1: d_s eta(u|S) closed form vs finite differences along the curve
// ---------------------------------------------------------------------------
void criterion_1(Harness& h) {
  bool ok = true;
  std::string detail;
  double worst_rel = 0.0;
  for (const std::string name : {"burgers", "p_system"}) {
    const SystemModel m = catalog_lookup(name);
    const Vec u = canonical_left(name);
    ContinuationConfig cfg;
    cfg.max_arclength = 1.5;
    cfg.h_max = 0.05;
    const HugoniotCurve curve = trace_curve(m, u, cfg);
    if (curve.points.size() < 26) {
      ok = false;
      detail = name + ": too few points";
      continue;
    }
    int checked = 0;
    for (std::size_t idx = 2; idx + 2 < curve.points.size() && checked < 25; ++idx, ++checked) {
      const double exact = relative_entropy_derivative(m, u, curve.points[idx]);
      auto fd = [&](double step) {
        const HugoniotPoint up = point_from_anchor(m, curve, idx, step);
        const HugoniotPoint dn = point_from_anchor(m, curve, idx, -step);
        return (relative_entropy(m, u, up.state) - relative_entropy(m, u, dn.state)) /
               (2.0 * step);
      };
      const double h1 = 1e-3;
      const double e1 = std::abs(fd(h1) - exact);
      const double e2 = std::abs(fd(0.5 * h1) - exact);
      const double scale = std::max(1.0, std::abs(exact));
      worst_rel = std::max(worst_rel, e2 / scale);
      if (e2 / scale > 1e-6) ok = false;
      // the Richardson ratio is meaningful only above the corrector noise floor
      if (e2 / scale > 1e-10 && e1 / e2 < 3.5) ok = false;
    }
    if (checked < 20) ok = false;
  }
  h.criterion(1, "relative-entropy derivative identity (FD vs closed form)", ok,
              "worst rel err " + fmt(worst_rel));
}

// ---------------------------------------------------------------------------
// criterion 2: traced curves vs closed-form loci
// ---------------------------------------------------------------------------
void criterion_2(Harness& h) {
  bool ok = true;
  double worst = 0.0;

  for (double gamma : {1.4, 2.0}) {
    const Params params{{"k", 1.0}, {"gamma", gamma}};
    const SystemModel m = catalog_lookup("p_system", params);
    const Vec u = canonical_left("p_system");
    ContinuationConfig cfg;
    cfg.max_arclength = 2.0;
    const HugoniotCurve c = trace_curve(m, u, cfg);
    for (const HugoniotPoint& p : c.points) {
      if (p.s == 0.0) continue;
      const auto [s_o, sig_o] = analytic_hugoniot("p_system", params, u, p.state[0]);
      const double err = std::max((p.state - s_o).cwiseAbs().maxCoeff(),
                                  std::abs(p.sigma - sig_o));
      worst = std::max(worst, err);
      if (err > 1e-8) ok = false;
    }
  }
  {
    const SystemModel m = catalog_lookup("euler_ideal");
    const Vec u = canonical_left("euler_ideal");
    ContinuationConfig cfg;
    cfg.max_arclength = 2.0;
    const HugoniotCurve c = trace_curve(m, u, cfg);
    for (const HugoniotPoint& p : c.points) {
      if (p.s == 0.0) continue;
      const double pr = 0.4 * (p.state[2] - 0.5 * p.state[1] * p.state[1] / p.state[0]);
      const auto [s_o, sig_o] = analytic_hugoniot("euler_ideal", {}, u, pr);
      const double err = std::max((p.state - s_o).cwiseAbs().maxCoeff(),
                                  std::abs(p.sigma - sig_o));
      worst = std::max(worst, err);
      if (err > 1e-8) ok = false;
    }
  }
  {
    const SystemModel m = catalog_lookup("burgers");
    const Vec u = canonical_left("burgers");
    ContinuationConfig cfg;
    cfg.max_arclength = 2.0;
    const HugoniotCurve c = trace_curve(m, u, cfg);
    for (const HugoniotPoint& p : c.points) {
      const double err = std::abs(p.sigma - 0.5 * (u[0] + p.state[0]));
      worst = std::max(worst, err);
      if (err > 1e-10) ok = false;
    }
  }
  h.criterion(2, "Hugoniot oracle equivalence (p-system, Euler, Burgers)", ok,
              "worst err " + fmt(worst));
}

// ---------------------------------------------------------------------------
// criterion 3: RH residual at every accepted sweep point
// ---------------------------------------------------------------------------
void criterion_3(Harness& h, const std::vector<NamedAudit>& audits) {
  bool ok = true;
  double worst = 0.0;
  long points = 0;
  for (const NamedAudit& na : audits)
    for (const StateAudit& sa : na.result.states)
      for (const SampleRecord& rec : sa.samples) {
        ++points;
        worst = std::max(worst, rec.report.point.rh_residual);
        if (rec.report.point.rh_residual > 1e-10) ok = false;
      }
  h.criterion(3, "scaled RH residual <= 1e-10 at every accepted point", ok,
              std::to_string(points) + " points, worst " + fmt(worst));
}

// ---------------------------------------------------------------------------
// criterion 4: PA symmetry and P-orthonormality at >= 1000 sampled states
// ---------------------------------------------------------------------------
void criterion_4(Harness& h) {
  bool ok = true;
  long count = 0;
  double worst_pa = 0.0, worst_gram = 0.0;
  std::mt19937_64 rng(812);
  for (const std::string& name : catalog_names()) {
    SystemModel m = catalog_lookup(name);
    for (int trial = 0; trial < 250; ++trial) {
      const Vec u = testutil::random_state(name, rng);
      const Mat p = m.entropy_hessian(u);
      const Mat a = m.jacobian(u);
      const Mat pa = p * a;
      const double pa_res = (pa - pa.transpose()).norm() / std::max(1e-300, pa.norm());
      worst_pa = std::max(worst_pa, pa_res);
      if (pa_res > 1e-8) ok = false;

      const SpectralData sd = eigen_decompose(m, u);
      const Mat gram = sd.eigenvectors.transpose() * p * sd.eigenvectors;
      const double gram_err = (gram - Mat::Identity(m.n, m.n)).cwiseAbs().maxCoeff();
      worst_gram = std::max(worst_gram, gram_err);
      if (gram_err > 1e-10) ok = false;
      ++count;
    }
  }
  if (count < 1000) ok = false;
  h.criterion(4, "spectral structure at sampled states", ok,
              std::to_string(count) + " states, worst PA " + fmt(worst_pa) + ", gram " +
                  fmt(worst_gram));
}

// ---------------------------------------------------------------------------
// criterion 5: Lopatinski implication audit over the default sweeps
// ---------------------------------------------------------------------------
void criterion_5(Harness& h, const std::vector<NamedAudit>& audits, double seconds) {
  bool ok = true;
  long hypothesis = 0, counter = 0;
  std::string why;
  for (const NamedAudit& na : audits) {
    if (na.label == "shallow_water") continue;  // not part of the default audit set
    hypothesis += na.result.tallies.hypothesis_points;
    counter += static_cast<long>(na.result.counterexamples.size());
    for (const StateAudit& sa : na.result.states) {
      if (sa.status != "traced") {
        ok = false;
        why = na.label + " state " + std::to_string(sa.grid_index) + " " + sa.status;
      } else if (static_cast<long>(sa.samples.size()) < 50) {
        ok = false;
        why = na.label + " state " + std::to_string(sa.grid_index) + " has only " +
              std::to_string(sa.samples.size()) + " samples";
      }
    }
    const Verdict v = implication_check(na.result);
    if (!v.pass) ok = false;
  }
  if (hypothesis == 0) ok = false;
  if (counter != 0) ok = false;
  if (seconds >= 30.0) ok = false;
  h.criterion(5, "implication audit: strict Lax + (i') + (ii') => |det| > 1e-6", ok,
              std::to_string(hypothesis) + " hypothesis points, " + std::to_string(counter) +
                  " counterexamples, " + fmt(seconds) + " s" +
                  (why.empty() ? "" : ", " + why));
}

// ---------------------------------------------------------------------------
// criterion 6: entropy dissipation wherever (i) holds on [0, s]
// ---------------------------------------------------------------------------
void criterion_6(Harness& h, const std::vector<NamedAudit>& audits) {
  bool ok = true;
  double worst = -std::numeric_limits<double>::infinity();
  long checked = 0;
  for (const NamedAudit& na : audits)
    for (const StateAudit& sa : na.result.states)
      for (const SampleRecord& rec : sa.samples) {
        if (!rec.cond_i_prefix || !rec.report.dissipation) continue;
        ++checked;
        worst = std::max(worst, *rec.report.dissipation);
        if (*rec.report.dissipation > 1e-10) ok = false;
      }
  if (checked == 0) ok = false;

  // Burgers spot value at (u_-, u_+) = (1, 0): [q] - sigma [eta] = -1/12
  const SystemModel m = catalog_lookup("burgers");
  const Vec u = canonical_left("burgers");
  const auto [s_o, sig_o] = analytic_hugoniot("burgers", {}, u, 0.0);
  HugoniotPoint spot;
  spot.s = 1.0;
  spot.state = s_o;
  spot.sigma = sig_o;
  spot.state_tangent = Vec::Constant(1, -1.0);
  spot.sigma_tangent = -0.5;
  const double d_spot = entropy_dissipation(m, u, spot);
  if (std::abs(d_spot - (-1.0 / 12.0)) > 1e-12) ok = false;

  ContinuationConfig cfg;
  cfg.max_arclength = 3.0;
  const HugoniotCurve c = trace_curve(m, u, cfg);
  const HugoniotPoint located =
      locate_parameter(m, c, [](const HugoniotPoint& p) { return p.state[0]; });
  const double d_traced = entropy_dissipation(m, u, located);
  if (std::abs(d_traced - (-1.0 / 12.0)) > 1e-12) ok = false;

  h.criterion(6, "entropy dissipation under condition (i), plus the -1/12 spot value", ok,
              std::to_string(checked) + " checked, worst " + fmt(worst) + ", spot err " +
                  fmt(std::abs(d_traced + 1.0 / 12.0)));
}

// ---------------------------------------------------------------------------
// criterion 7: the quadratic-form identity and the sign facts beta_j alpha_j
// ---------------------------------------------------------------------------
void criterion_7(Harness& h, const std::vector<NamedAudit>& audits) {
  bool ok = true;
  double worst_ratio = 0.0, worst_sign = 0.0;
  long points = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (const NamedAudit& na : audits)
    for (const StateAudit& sa : na.result.states)
      for (const SampleRecord& rec : sa.samples) {
        const ConditionReport& r = rec.report;
        ++points;
        const Mat p = na.model.entropy_hessian(r.point.state);
        const Mat a = na.model.jacobian(r.point.state);
        const double tnorm = r.point.state_tangent.norm();
        const double rhs = r.speed_deriv * r.rel_entropy_deriv;
        // scaled residual: the lrh defect amplified through the symmetrizer,
        // plus the roundoff floor of the two quadratic forms
        const double scaled = r.lrh_residual * p.norm() * tnorm +
                              eps * p.norm() * (a.norm() + std::abs(r.point.sigma)) *
                                  tnorm * tnorm;
        const double err = std::abs(r.quadratic_form - rhs);
        worst_ratio = std::max(worst_ratio, err / std::max(scaled, 1e-300));
        if (err > 10.0 * scaled) ok = false;
        for (Eigen::Index j = 1; j < r.alpha.size(); ++j) {
          const double prod = r.beta[j] * r.alpha[j];
          worst_sign = std::min(worst_sign, prod);
          if (prod < -1e-10) ok = false;
        }
      }
  h.criterion(7, "proof identity Q = sigma' <S', P(S-u)> and beta_j alpha_j >= 0", ok,
              std::to_string(points) + " points, worst err/scale " + fmt(worst_ratio) +
                  ", min beta*alpha " + fmt(worst_sign));
}

// ---------------------------------------------------------------------------
// criterion 8: small-amplitude limits at the smallest traced samples
// ---------------------------------------------------------------------------
void criterion_8(Harness& h) {
  bool ok = true;
  double worst_sigma = 0.0, worst_lop = 0.0;
  for (const std::string& name : catalog_names()) {
    Params params;
    const SystemModel m = catalog_lookup(name, params);
    const Vec u = canonical_left(name);
    ContinuationConfig cfg;
    cfg.max_arclength = 0.25;
    const HugoniotCurve c = trace_curve(m, u, cfg);
    if (c.points.size() < 3) {
      ok = false;
      continue;
    }
    const SpectralData sd = eigen_decompose(m, u);
    const double frame =
        std::abs(normalized_determinant(sd.eigenvectors, m.entropy_hessian(u)));
    const HugoniotPoint& first = c.points[1];
    const double dsigma = std::abs(first.sigma - sd.eigenvalues[0]);
    const double dlop = std::abs(std::abs(lopatinski(m, u, first)) - frame);
    worst_sigma = std::max(worst_sigma, dsigma);
    worst_lop = std::max(worst_lop, dlop);
    if (dsigma > 1e-3 || dlop > 1e-3) ok = false;
  }
  h.criterion(8, "small-amplitude limits of sigma and the normalized determinant", ok,
              "worst d_sigma " + fmt(worst_sigma) + ", worst d_lop " + fmt(worst_lop));
}

// ---------------------------------------------------------------------------
// criterion 9: expression language (AD vs FD, round trip, catalog parity)
// ---------------------------------------------------------------------------
nlohmann::json equivalent_config(const std::string& name) {
  if (name == "burgers")
    return nlohmann::json::parse(R"json({
      "n": 1, "flux": ["u1*u1/2"], "entropy": "u1*u1/2",
      "entropy_flux": "u1*u1*u1/3"})json");
  if (name == "p_system")
    return nlohmann::json::parse(R"json({
      "n": 2, "state_names": ["v", "u"], "params": {"k": 1.0, "gamma": 2.0},
      "flux": ["-u", "k*v^(-gamma)"],
      "entropy": "u*u/2 + k*v^(1-gamma)/(gamma-1)",
      "entropy_flux": "u*k*v^(-gamma)", "domain": ["v"]})json");
  if (name == "euler_ideal")
    return nlohmann::json::parse(R"json({
      "n": 3, "params": {"gamma": 1.4},
      "flux": ["u2",
               "u2*u2/u1 + (gamma-1)*(u3 - u2*u2/(2*u1))",
               "u2/u1*(u3 + (gamma-1)*(u3 - u2*u2/(2*u1)))"],
      "entropy": "-u1/(gamma-1)*log((gamma-1)*(u3 - u2*u2/(2*u1))*u1^(-gamma))",
      "entropy_flux": "-u2/(gamma-1)*log((gamma-1)*(u3 - u2*u2/(2*u1))*u1^(-gamma))",
      "domain": ["u1", "(gamma-1)*(u3 - u2*u2/(2*u1))"]})json");
  return nlohmann::json::parse(R"json({
      "n": 2, "params": {"g": 1.0},
      "flux": ["u2", "u2*u2/u1 + g*u1*u1/2"],
      "entropy": "u2*u2/(2*u1) + g*u1*u1/2",
      "entropy_flux": "u2*u2*u2/(2*u1*u1) + g*u1*u2",
      "domain": ["u1"]})json");
}

void criterion_9(Harness& h) {
  bool ok = true;
  std::string why;
  double worst_fd = 0.0;

  // (a) AD gradients and Hessians against central differences
  std::mt19937_64 rng(813);
  for (const std::string& name : catalog_names()) {
    const nlohmann::json cfg = equivalent_config(name);
    ex::SymbolTable sym;
    sym.n = cfg["n"].get<int>();
    if (cfg.contains("state_names"))
      for (const auto& s : cfg["state_names"]) sym.state_names.push_back(s.get<std::string>());
    ex::ParamMap params;
    if (cfg.contains("params"))
      for (const auto& [key, value] : cfg["params"].items()) params[key] = value.get<double>();

    std::vector<ex::ExprAst> exprs;
    for (const auto& f : cfg["flux"]) exprs.push_back(ex::parse(f.get<std::string>(), sym));
    exprs.push_back(ex::parse(cfg["entropy"].get<std::string>(), sym));

    for (int trial = 0; trial < 100; ++trial) {
      const Vec u = testutil::random_state(name, rng);
      for (const ex::ExprAst& ast : exprs) {
        const ex::JetValue jet = ex::eval_jet(ast, u, params);
        for (int i = 0; i < sym.n; ++i) {
          const double step = 1e-5 * (1.0 + std::abs(u[i]));
          Vec up = u, dn = u;
          up[i] += step;
          dn[i] -= step;
          const double fd =
              (ex::eval_value(ast, up, params) - ex::eval_value(ast, dn, params)) / (2.0 * step);
          const double rel =
              std::abs(jet.gradient[i] - fd) / (1.0 + std::abs(jet.gradient[i]));
          worst_fd = std::max(worst_fd, rel);
          if (rel > 1e-6) ok = false;
        }
        for (int i = 0; i < sym.n; ++i)
          for (int j = i; j < sym.n; ++j) {
            const double hi = 1e-4 * (1.0 + std::abs(u[i]));
            const double hj = 1e-4 * (1.0 + std::abs(u[j]));
            double fd;
            if (i == j) {
              Vec up = u, dn = u;
              up[i] += hi;
              dn[i] -= hi;
              fd = (ex::eval_value(ast, up, params) - 2.0 * ex::eval_value(ast, u, params) +
                    ex::eval_value(ast, dn, params)) /
                   (hi * hi);
            } else {
              Vec pp = u, pm = u, mp = u, mm = u;
              pp[i] += hi;
              pp[j] += hj;
              pm[i] += hi;
              pm[j] -= hj;
              mp[i] -= hi;
              mp[j] += hj;
              mm[i] -= hi;
              mm[j] -= hj;
              fd = (ex::eval_value(ast, pp, params) - ex::eval_value(ast, pm, params) -
                    ex::eval_value(ast, mp, params) + ex::eval_value(ast, mm, params)) /
                   (4.0 * hi * hj);
            }
            const double rel =
                std::abs(jet.hessian(i, j) - fd) / (1.0 + std::abs(jet.hessian(i, j)));
            worst_fd = std::max(worst_fd, rel);
            if (rel > 1e-6) ok = false;
          }
      }
    }
  }
  if (!ok) why = "AD/FD mismatch";

  // (b) parser round trip on the corpus
  ex::SymbolTable sym;
  sym.n = 3;
  sym.state_names = {"v", "w", "z"};
  if (testutil::expression_corpus().size() < 50) ok = false;
  for (const std::string& src : testutil::expression_corpus()) {
    const ex::ExprAst first = ex::parse(src, sym);
    const ex::ExprAst second = ex::parse(ex::to_string(first), sym);
    if (!ex::tree_equal(first, second)) {
      ok = false;
      why = "round trip failed on " + src;
    }
  }

  // (c) expression-defined p-system reproduces the catalog criterion values
  {
    nlohmann::json cfg = equivalent_config("p_system");
    cfg["validation_samples"] = {{1.0, 0.0}};
    const SystemModel built = ex::build_system(cfg);
    const SystemModel cat = catalog_lookup("p_system", {{"k", 1.0}, {"gamma", 2.0}});
    const Vec u = canonical_left("p_system");
    ContinuationConfig cc;
    cc.max_arclength = 2.0;
    const HugoniotCurve c_built = trace_curve(built, u, cc);
    const HugoniotCurve c_cat = trace_curve(cat, u, cc);
    auto at_half = [](const SystemModel& m, const HugoniotCurve& c) {
      return locate_parameter(m, c,
                              [](const HugoniotPoint& p) { return p.state[0] - 0.5; });
    };
    const ConditionReport r_built = evaluate_point(built, u, at_half(built, c_built));
    const ConditionReport r_cat = evaluate_point(cat, u, at_half(cat, c_cat));
    const double dev = std::max(
        {std::abs(r_built.lopatinski_det - r_cat.lopatinski_det),
         std::abs(r_built.rel_entropy - r_cat.rel_entropy),
         std::abs(r_built.rel_entropy_deriv - r_cat.rel_entropy_deriv),
         std::abs(r_built.speed_deriv - r_cat.speed_deriv),
         std::abs(*r_built.dissipation - *r_cat.dissipation),
         (r_built.lax_margins - r_cat.lax_margins).cwiseAbs().maxCoeff()});
    if (dev > 1e-9) {
      ok = false;
      why = "catalog parity dev " + fmt(dev);
    }
  }
  h.criterion(9, "expression language: AD exactness, round trip, catalog parity", ok,
              why.empty() ? "worst AD/FD rel err " + fmt(worst_fd) : why);
}

// ---------------------------------------------------------------------------
// criterion 10: byte-identical audit documents for any --jobs
// ---------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_10(Harness& h) {
  const fs::path dir =
      fs::temp_directory_path() / ("shockstab_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool ok = true;
  std::string detail = "byte-identical";

  const fs::path cfg_path = dir / "audit.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"json({"system": {"catalog": "p_system", "params": {"k": 1.0, "gamma": 2.0}}})json";
  }
  auto run = [&](int jobs, const std::string& out) {
    const std::string cmd = std::string(SHOCKSTAB_CLI_PATH) + " audit --config " +
                            cfg_path.string() + " --jobs " + std::to_string(jobs) + " --out " +
                            (dir / out).string() + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  if (run(1, "a1.json") != 0 || run(4, "a2.json") != 0) {
    ok = false;
    detail = "audit command failed";
  } else {
    const std::string a1 = slurp(dir / "a1.json");
    const std::string a2 = slurp(dir / "a2.json");
    if (a1.empty() || a1 != a2) {
      ok = false;
      detail = "documents differ";
    }
    if (slurp(dir / "a1.json.table.tsv") != slurp(dir / "a2.json.table.tsv")) {
      ok = false;
      detail = "tables differ";
    }
  }
  fs::remove_all(dir);
  h.criterion(10, "audit output is deterministic across --jobs", ok, detail);
}

}  // namespace

int main() {
  Harness h;

  criterion_1(h);
  criterion_2(h);

  // one shared set of default sweeps feeds criteria 3, 5, 6 and 7
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<NamedAudit> audits;
  {
    NamedAudit na{"burgers", catalog_lookup("burgers"), {}};
    SweepSpec spec = default_sweep("burgers");
    spec.jobs = 4;
    na.result = run_audit(na.model, spec);
    audits.push_back(std::move(na));
  }
  for (double gamma : {1.4, 2.0}) {
    NamedAudit na{"p_system gamma=" + fmt(gamma),
                  catalog_lookup("p_system", {{"k", 1.0}, {"gamma", gamma}}),
                  {}};
    SweepSpec spec = default_sweep("p_system");
    spec.jobs = 4;
    na.result = run_audit(na.model, spec);
    audits.push_back(std::move(na));
  }
  {
    NamedAudit na{"euler_ideal", catalog_lookup("euler_ideal"), {}};
    SweepSpec spec = default_sweep("euler_ideal");
    spec.jobs = 4;
    na.result = run_audit(na.model, spec);
    audits.push_back(std::move(na));
  }
  const double sweep_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  {
    NamedAudit na{"shallow_water", catalog_lookup("shallow_water"), {}};
    SweepSpec spec = default_sweep("shallow_water");
    spec.jobs = 4;
    na.result = run_audit(na.model, spec);
    audits.push_back(std::move(na));
  }

  criterion_3(h, audits);
  criterion_4(h);
  criterion_5(h, audits, sweep_seconds);
  criterion_6(h, audits);
  criterion_7(h, audits);
  criterion_8(h);
  criterion_9(h);
  criterion_10(h);

  if (h.failures == 0)
    std::printf("acceptance: all 10 criteria PASS\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", h.failures);
  return h.failures;
}
