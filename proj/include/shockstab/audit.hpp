#pragma once

#include <atomic>
#include <cmath>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "shockstab/criteria.hpp"
#include "shockstab/errors.hpp"
#include "shockstab/hugoniot.hpp"
#include "shockstab/serialize.hpp"
#include "shockstab/systems.hpp"
#include "shockstab/types.hpp"

namespace shockstab {

struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  double value(int i) const {
    if (count <= 1) return min;
    return min + (max - min) * static_cast<double>(i) / (count - 1);
  }
};

/// Grid of left states (one axis per state component) plus the continuation
/// and tolerance settings shared by every curve of the sweep.
struct SweepSpec {
  std::vector<AxisSpec> left_grid;
  ContinuationConfig continuation;
  int sample_stride = 1;
  TolerancePolicy tolerances;
  int jobs = 1;
};

struct SampleRecord {
  ConditionReport report;
  bool hypotheses = false;     // strict Lax margins, sigma' < -eps, d_s eta >= -band
  bool lop_ok = false;         // |normalized determinant| > delta_lop
  bool cond_i_prefix = false;  // sigma' <= band at every sample up to this one
};

struct StateAudit {
  long grid_index = 0;
  Vec left_state;
  std::string status;  // "traced", "inadmissible", or "untraced: <reason>"
  StopReason stop = StopReason::NotStarted;
  std::string stop_detail;
  bool gnl_degenerate = false;
  std::vector<SampleRecord> samples;
};

struct Tallies {
  long states_total = 0;
  long states_traced = 0;
  long samples = 0;
  long hypothesis_points = 0;         // (i') and (ii') and strict Lax
  long stable_hypothesis_points = 0;  // of those, |lopatinski| > delta_lop
  long dissipation_checked = 0;       // samples with (i) holding on [0, s] and q available
  long dissipation_ok = 0;
  long openness_points = 0;  // Lopatinski holds while (i') or (ii') fails
};

struct Counterexample {
  long grid_index = 0;
  double s = 0.0;
  double lopatinski_det = 0.0;
  double speed_deriv = 0.0;
  double rel_entropy_deriv = 0.0;
  double lax_min = 0.0;
};

struct AuditResult {
  std::vector<StateAudit> states;
  Tallies tallies;
  std::vector<Counterexample> counterexamples;
};

namespace detail {

inline long grid_size(const std::vector<AxisSpec>& grid) {
  long total = 1;
  for (const AxisSpec& a : grid) total *= std::max(1, a.count);
  return grid.empty() ? 0 : total;
}

inline Vec grid_state(const std::vector<AxisSpec>& grid, long index) {
  Vec u(grid.size());
  // row-major: last axis varies fastest
  for (int d = static_cast<int>(grid.size()) - 1; d >= 0; --d) {
    const int count = std::max(1, grid[d].count);
    u[d] = grid[d].value(static_cast<int>(index % count));
    index /= count;
  }
  return u;
}

inline StateAudit audit_one_state(const SystemModel& model, const SweepSpec& spec,
                                  long index) {
  StateAudit sa;
  sa.grid_index = index;
  sa.left_state = grid_state(spec.left_grid, index);
  if (!model.admissible(sa.left_state)) {
    sa.status = "inadmissible";
    return sa;
  }
  HugoniotCurve curve;
  try {
    curve = trace_curve(model, sa.left_state, spec.continuation, Branch::Shock);
  } catch (const Error& e) {
    sa.status = std::string("untraced: ") + e.what();
    return sa;
  }
  sa.stop = curve.stop_reason;
  sa.stop_detail = curve.stop_detail;
  sa.gnl_degenerate = curve.gnl_degenerate;
  if (curve.points.size() < 2) {
    sa.status = "untraced: " + (curve.stop_detail.empty()
                                    ? std::string(to_string(curve.stop_reason))
                                    : curve.stop_detail);
    return sa;
  }
  sa.status = "traced";

  const TolerancePolicy& pol = spec.tolerances;
  std::vector<ConditionReport> profile;
  try {
    profile = evaluate_profile(model, curve, spec.sample_stride, pol);
  } catch (const Error& e) {
    sa.status = std::string("untraced: ") + e.what();
    return sa;
  }

  bool prefix = curve.seed().sigma_tangent <= pol.band(curve.seed().sigma_tangent);
  for (ConditionReport& r : profile) {
    SampleRecord rec;
    rec.lop_ok = r.flags.lopatinski;
    rec.hypotheses = r.flags.lax && (r.speed_deriv < -pol.eps_eq) &&
                     r.flags.rel_entropy_nondecreasing;
    prefix = prefix && (r.speed_deriv <= pol.band(r.speed_deriv));
    rec.cond_i_prefix = prefix;
    rec.report = std::move(r);
    sa.samples.push_back(std::move(rec));
  }
  return sa;
}

}  // namespace detail

/// Runs the sweep: seed, trace and sample a curve from every grid state and
/// evaluate all criteria at every sample. Left states are independent work
/// items; results are merged by grid index, so the output is identical for
/// any number of jobs. Continuation failures are recorded per state.
inline AuditResult run_audit(const SystemModel& model, const SweepSpec& spec) {
  if (!spec.left_grid.empty() &&
      static_cast<int>(spec.left_grid.size()) != model.n)
    throw ConfigError("run_audit: grid must have one axis per state component");
  spec.continuation.validate();
  spec.tolerances.validate();

  AuditResult result;
  const long total = detail::grid_size(spec.left_grid);
  result.states.resize(total);

  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1 || total <= 1) {
    for (long i = 0; i < total; ++i)
      result.states[i] = detail::audit_one_state(model, spec, i);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(std::min<long>(jobs, total));
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const long i = next.fetch_add(1);
          if (i >= total) return;
          result.states[i] = detail::audit_one_state(model, spec, i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  Tallies& t = result.tallies;
  t.states_total = total;
  for (const StateAudit& sa : result.states) {
    if (sa.status == "traced") ++t.states_traced;
    for (const SampleRecord& rec : sa.samples) {
      ++t.samples;
      const TolerancePolicy& pol = spec.tolerances;
      if (rec.hypotheses) {
        ++t.hypothesis_points;
        if (rec.lop_ok)
          ++t.stable_hypothesis_points;
        else
          result.counterexamples.push_back(
              {sa.grid_index, rec.report.point.s, rec.report.lopatinski_det,
               rec.report.speed_deriv, rec.report.rel_entropy_deriv,
               rec.report.lax_margins.minCoeff()});
      }
      if (rec.cond_i_prefix && rec.report.dissipation) {
        ++t.dissipation_checked;
        if (*rec.report.dissipation <= pol.band(*rec.report.dissipation)) ++t.dissipation_ok;
      }
      if (rec.lop_ok &&
          !(rec.report.flags.speed_nonincreasing && rec.report.flags.rel_entropy_nondecreasing))
        ++t.openness_points;
    }
  }
  return result;
}

struct Verdict {
  bool pass = false;
  bool vacuous = false;
  std::string summary;
};

/// PASS iff no sample satisfies the hypotheses while the normalized
/// determinant sits below delta_lop. Recounts from the stored reports and
/// cross-checks the stored tallies.
inline Verdict implication_check(const AuditResult& result) {
  long hypothesis = 0, stable = 0, counter = 0;
  for (const StateAudit& sa : result.states)
    for (const SampleRecord& rec : sa.samples) {
      if (!rec.hypotheses) continue;
      ++hypothesis;
      rec.lop_ok ? ++stable : ++counter;
    }
  if (hypothesis != result.tallies.hypothesis_points ||
      stable != result.tallies.stable_hypothesis_points ||
      counter != static_cast<long>(result.counterexamples.size()))
    throw std::logic_error("implication_check: tallies inconsistent with stored reports");

  Verdict v;
  v.pass = counter == 0;
  v.vacuous = hypothesis == 0;
  std::ostringstream os;
  if (v.pass && v.vacuous)
    os << "PASS (vacuous): no sample satisfied the hypotheses";
  else if (v.pass)
    os << "PASS: " << stable << "/" << hypothesis
       << " hypothesis points Lopatinski-stable, 0 counterexamples";
  else {
    os << "FAIL: " << counter << " counterexample(s):";
    for (const Counterexample& c : result.counterexamples)
      os << "\n  grid_index=" << c.grid_index << " s=" << c.s
         << " lopatinski=" << c.lopatinski_det << " sigma'=" << c.speed_deriv
         << " d_s_rel_entropy=" << c.rel_entropy_deriv << " lax_min=" << c.lax_min;
  }
  v.summary = os.str();
  return v;
}

inline OJson to_json(const Tallies& t) {
  OJson j;
  j["states_total"] = t.states_total;
  j["states_traced"] = t.states_traced;
  j["samples"] = t.samples;
  j["hypothesis_points"] = t.hypothesis_points;
  j["stable_hypothesis_points"] = t.stable_hypothesis_points;
  j["dissipation_checked"] = t.dissipation_checked;
  j["dissipation_ok"] = t.dissipation_ok;
  j["openness_points"] = t.openness_points;
  return j;
}

inline OJson to_json(const AuditResult& result) {
  OJson j;
  j["format"] = "audit_result";
  const Verdict v = implication_check(result);
  j["verdict"] = v.vacuous && v.pass ? "PASS (vacuous)" : v.pass ? "PASS" : "FAIL";
  j["tallies"] = to_json(result.tallies);
  OJson ces = OJson::array();
  for (const Counterexample& c : result.counterexamples) {
    OJson cj;
    cj["grid_index"] = c.grid_index;
    cj["s"] = c.s;
    cj["lopatinski_det"] = c.lopatinski_det;
    cj["speed_deriv"] = c.speed_deriv;
    cj["rel_entropy_deriv"] = c.rel_entropy_deriv;
    cj["lax_min"] = c.lax_min;
    ces.push_back(std::move(cj));
  }
  j["counterexamples"] = std::move(ces);
  OJson states = OJson::array();
  for (const StateAudit& sa : result.states) {
    OJson sj;
    sj["grid_index"] = sa.grid_index;
    sj["left_state"] = detail::vec_to_json(sa.left_state);
    sj["status"] = sa.status;
    sj["stop_reason"] = to_string(sa.stop);
    sj["stop_detail"] = sa.stop_detail;
    sj["gnl_degenerate"] = sa.gnl_degenerate;
    OJson samples = OJson::array();
    for (const SampleRecord& rec : sa.samples) {
      OJson rj;
      rj["report"] = to_json(rec.report);
      rj["hypotheses"] = rec.hypotheses;
      rj["lop_ok"] = rec.lop_ok;
      rj["cond_i_prefix"] = rec.cond_i_prefix;
      samples.push_back(std::move(rj));
    }
    sj["samples"] = std::move(samples);
    states.push_back(std::move(sj));
  }
  j["states"] = std::move(states);
  return j;
}

/// Plot-ready table: s, sigma', d_s relative entropy and |lopatinski| per
/// left state, one block per grid index.
inline void write_audit_table(std::ostream& os, const AuditResult& result) {
  os << "grid_index\ts\tsigma_prime\tds_rel_entropy\tabs_lopatinski\n";
  for (const StateAudit& sa : result.states)
    for (const SampleRecord& rec : sa.samples)
      os << sa.grid_index << '\t' << detail::fmt17(rec.report.point.s) << '\t'
         << detail::fmt17(rec.report.speed_deriv) << '\t'
         << detail::fmt17(rec.report.rel_entropy_deriv) << '\t'
         << detail::fmt17(std::abs(rec.report.lopatinski_det)) << '\n';
}

/// Default sweep for a catalog system: the grids used by the built-in audit.
inline SweepSpec default_sweep(const std::string& name) {
  SweepSpec spec;
  spec.continuation.max_arclength = 2.0;
  spec.continuation.h_max = 0.03;
  if (name == "burgers") {
    spec.left_grid = {{0.5, 2.0, 3}};
  } else if (name == "p_system") {
    spec.left_grid = {{0.5, 2.0, 5}, {-1.0, 1.0, 5}};
  } else if (name == "euler_ideal") {
    // rho and E axes vary, momentum 0; E = p/(gamma-1) for p in [0.8, 1.25], gamma = 1.4
    spec.left_grid = {{0.8, 1.25, 3}, {0.0, 0.0, 1}, {2.0, 3.125, 3}};
  } else if (name == "shallow_water") {
    spec.left_grid = {{0.5, 2.0, 3}, {-0.5, 0.5, 3}};
  } else {
    throw ConfigError("default_sweep: unknown system '" + name + "'");
  }
  return spec;
}

}  // namespace shockstab
