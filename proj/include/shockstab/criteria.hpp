#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "shockstab/errors.hpp"
#include "shockstab/hugoniot.hpp"
#include "shockstab/spectral.hpp"
#include "shockstab/types.hpp"

namespace shockstab {

/// Floating-point bands for the nonstrict inequalities of the criteria.
/// Bands are relative to the magnitude of the value under test:
/// band(x) = eps_eq * (1 + |x|).
struct TolerancePolicy {
  double eps_eq = 1e-10;
  double delta_lop = 1e-6;  // |normalized determinant| below this is near-degenerate

  void validate() const {
    if (!(eps_eq > 0.0) || !(delta_lop > 0.0))
      throw std::invalid_argument("TolerancePolicy: tolerances must be positive");
  }
  double band(double magnitude) const { return eps_eq * (1.0 + std::abs(magnitude)); }
};

/// eta(u) - eta(v) - grad(eta)(v).(u - v); nonnegative for convex entropy,
/// zero iff u = v when the entropy is strictly convex.
inline double relative_entropy(const SystemModel& model, const Vec& u, const Vec& v) {
  model.require_admissible(u, "relative_entropy");
  model.require_admissible(v, "relative_entropy");
  return model.entropy(u) - model.entropy(v) - model.entropy_gradient(v).dot(u - v);
}

/// Closed form of d_s eta(u | S_u(s)): <S', P(S) (S - u)>.
inline double relative_entropy_derivative(const SystemModel& model, const Vec& u,
                                          const HugoniotPoint& pt) {
  return pt.state_tangent.dot(model.entropy_hessian(pt.state) * (pt.state - u));
}

/// Lax 1-shock margins at a curve point; see lax_margins_of for the layout.
inline Vec lax_check(const SystemModel& model, const Vec& u, const HugoniotPoint& pt) {
  const double a1_left = eigen_decompose(model, u).eigenvalues[0];
  const SpectralData sd = eigen_decompose(model, pt.state);
  return lax_margins_of(a1_left, pt.sigma, sd.eigenvalues);
}

/// Normalized Lopatinski determinant det[(S-u) r_2(S) ... r_n(S)] with
/// P(S)-unit columns. Stability corresponds to a value bounded away from zero.
inline double lopatinski_from(const SystemModel& model, const Vec& u,
                              const HugoniotPoint& pt, const SpectralData& sd_right) {
  if (!(pt.s > 0.0)) throw EvalError("lopatinski: degenerate: zero-amplitude shock");
  const Eigen::Index n = model.n;
  Mat cols(n, n);
  cols.col(0) = pt.state - u;
  for (Eigen::Index j = 1; j < n; ++j) cols.col(j) = sd_right.eigenvectors.col(j);
  return normalized_determinant(cols, model.entropy_hessian(pt.state));
}

inline double lopatinski(const SystemModel& model, const Vec& u, const HugoniotPoint& pt) {
  return lopatinski_from(model, u, pt, eigen_decompose(model, pt.state));
}

/// [q] - sigma [eta] across the discontinuity; dissipative when <= 0.
inline double entropy_dissipation(const SystemModel& model, const Vec& u,
                                  const HugoniotPoint& pt) {
  if (!model.entropy_flux) throw EvalError("entropy flux unavailable for system '" +
                                           model.name + "'");
  const ScalarFn& q = *model.entropy_flux;
  return (q(pt.state) - q(u)) - pt.sigma * (model.entropy(pt.state) - model.entropy(u));
}

/// Internal quantities of the stability argument at a curve point:
/// the eigen-expansion S - u = sum_j alpha_j r_j(S), the scaled coefficients
/// beta_j = alpha_j / (a_j(S) - sigma), the quadratic form
/// Q = <S', P(S)(A(S) - sigma) S'> and the linearized-RH residual.
/// For a Lax 1-shock, beta_j alpha_j >= 0 for j >= 2, and the linearized RH
/// relation forces Q = sigma' <S', P(S)(S - u)>.
struct ProofDiagnostics {
  Vec alpha;
  Vec beta;
  double quadratic_form = 0.0;
  double lrh_residual = 0.0;
};

inline ProofDiagnostics proof_diagnostics_from(const SystemModel& model, const Vec& u,
                                               const HugoniotPoint& pt,
                                               const SpectralData& sd_right,
                                               const SpectralOptions& opt = {}) {
  if (!(pt.s > 0.0)) throw EvalError("proof_diagnostics: degenerate: zero-amplitude shock");
  const Eigen::Index n = model.n;
  const Mat p = model.entropy_hessian(pt.state);
  const Mat a = model.jacobian(pt.state);

  ProofDiagnostics d;
  d.alpha.resize(n);
  d.beta.resize(n);
  const Vec weighted = p * (pt.state - u);
  const double scale = std::max(1.0, a.norm());
  for (Eigen::Index j = 0; j < n; ++j) {
    d.alpha[j] = sd_right.eigenvectors.col(j).dot(weighted);  // P-orthonormal expansion
    const double gap = sd_right.eigenvalues[j] - pt.sigma;
    if (std::abs(gap) < opt.eps_inv * scale)
      throw SpectralError("proof_diagnostics: shift resonant with spectrum at s = " +
                          std::to_string(pt.s));
    d.beta[j] = d.alpha[j] / gap;
  }
  const Vec shifted_tangent = (a - pt.sigma * Mat::Identity(n, n)) * pt.state_tangent;
  d.quadratic_form = pt.state_tangent.dot(p * shifted_tangent);
  d.lrh_residual = (shifted_tangent - pt.sigma_tangent * (pt.state - u)).norm();
  return d;
}

inline ProofDiagnostics proof_diagnostics(const SystemModel& model, const Vec& u,
                                          const HugoniotPoint& pt) {
  return proof_diagnostics_from(model, u, pt, eigen_decompose(model, pt.state));
}

/// Flags derived from raw report values; idempotent given the same policy.
inline ConditionFlags apply_policy(const ConditionReport& r, const TolerancePolicy& pol) {
  ConditionFlags f;
  const double speed_scale =
      std::abs(r.point.sigma) + (r.lax_margins.size() ? r.lax_margins.cwiseAbs().maxCoeff() : 0.0);
  f.lax = r.lax_margins.size() > 0 && r.lax_margins.minCoeff() > pol.band(speed_scale);
  f.lopatinski = std::abs(r.lopatinski_det) > pol.delta_lop;
  f.speed_nonincreasing = r.speed_deriv <= pol.band(r.speed_deriv);
  f.rel_entropy_nondecreasing = r.rel_entropy_deriv >= -pol.band(r.rel_entropy_deriv);
  if (r.dissipation) f.dissipative = *r.dissipation <= pol.band(*r.dissipation);
  return f;
}

/// Full criterion evaluation at one curve point (s > 0), with caller-supplied
/// spectra so a profile can keep eigenvector signs continuous.
inline ConditionReport evaluate_point_with(const SystemModel& model, const Vec& u,
                                           const HugoniotPoint& pt, double a1_left,
                                           const SpectralData& sd_right,
                                           const TolerancePolicy& pol = {}) {
  ConditionReport r;
  r.point = pt;
  r.lax_margins = lax_margins_of(a1_left, pt.sigma, sd_right.eigenvalues);
  r.lopatinski_det = lopatinski_from(model, u, pt, sd_right);
  r.rel_entropy = relative_entropy(model, u, pt.state);
  r.rel_entropy_deriv = relative_entropy_derivative(model, u, pt);
  r.speed_deriv = pt.sigma_tangent;
  if (model.entropy_flux) r.dissipation = entropy_dissipation(model, u, pt);
  const ProofDiagnostics d = proof_diagnostics_from(model, u, pt, sd_right);
  r.alpha = d.alpha;
  r.beta = d.beta;
  r.quadratic_form = d.quadratic_form;
  r.lrh_residual = d.lrh_residual;
  r.flags = apply_policy(r, pol);
  return r;
}

inline ConditionReport evaluate_point(const SystemModel& model, const Vec& u,
                                      const HugoniotPoint& pt,
                                      const TolerancePolicy& pol = {}) {
  const double a1_left = eigen_decompose(model, u).eigenvalues[0];
  return evaluate_point_with(model, u, pt, a1_left, eigen_decompose(model, pt.state), pol);
}

/// Criterion reports along a curve at the given stride (seed excluded, last
/// point always included). Eigenvector signs are aligned sample-to-sample so
/// the reported determinant is continuous.
inline std::vector<ConditionReport> evaluate_profile(const SystemModel& model,
                                                     const HugoniotCurve& curve,
                                                     int stride = 1,
                                                     const TolerancePolicy& pol = {}) {
  if (stride < 1) throw std::invalid_argument("evaluate_profile: stride must be >= 1");
  std::vector<ConditionReport> out;
  if (curve.points.size() < 2) return out;
  const Vec& u = curve.left_state;
  const double a1_left = eigen_decompose(model, u).eigenvalues[0];

  std::optional<SpectralData> prev;
  std::vector<std::size_t> picks;
  for (std::size_t i = 1; i < curve.points.size(); i += stride) picks.push_back(i);
  if (picks.empty() || picks.back() != curve.points.size() - 1)
    picks.push_back(curve.points.size() - 1);

  for (std::size_t i : picks) {
    SpectralData sd = eigen_decompose(model, curve.points[i].state);
    if (prev) sd = align_signs(std::move(sd), *prev);
    out.push_back(evaluate_point_with(model, u, curve.points[i], a1_left, sd, pol));
    prev = std::move(sd);
  }
  return out;
}

struct FlagWithMargin {
  bool pass = false;
  double margin = 0.0;  // worst-case value of the tested quantity
  double at_s = 0.0;    // where the worst case occurs
};

struct LvFlags {
  FlagWithMargin i;        // sigma'(s) <= 0 on [0, s_plus]
  FlagWithMargin ii;       // d_s eta(u|S) >= 0 on [0, s_plus]
  FlagWithMargin i_prime;  // sigma'(s_plus) <= 0
  FlagWithMargin ii_prime; // d_s eta(u|S)(s_plus) >= 0
  FlagWithMargin ii_star;  // (s - s_plus)(eta(u|S(s)) - eta(u|S(s_plus))) >= 0, whole range
};

/// Monotonicity conditions along the curve through s_plus: the interval forms
/// (i)/(ii), the endpoint forms (i')/(ii'), and the weakened integral-sign
/// form (ii*), each with its worst-case margin and location.
inline LvFlags lv_conditions(const SystemModel& model, const Vec& u,
                             const HugoniotCurve& curve, double s_plus,
                             const TolerancePolicy& pol = {}) {
  pol.validate();
  if (curve.points.empty()) throw std::invalid_argument("lv_conditions: empty curve");
  if (s_plus < 0.0 || s_plus > curve.arclength() * (1.0 + 1e-12))
    throw ContinuationError("lv_conditions: s_plus beyond traced range");

  const HugoniotPoint plus = point_at(model, curve, s_plus);
  const double eta_plus = relative_entropy(model, u, plus.state);

  LvFlags f;
  f.i = {true, plus.sigma_tangent, s_plus};
  f.ii = {true, relative_entropy_derivative(model, u, plus), s_plus};
  f.ii_star = {true, 0.0, s_plus};

  for (const HugoniotPoint& pt : curve.points) {
    if (pt.s <= s_plus * (1.0 + 1e-12)) {
      if (pt.sigma_tangent > f.i.margin) f.i = {true, pt.sigma_tangent, pt.s};
      const double d = relative_entropy_derivative(model, u, pt);
      if (d < f.ii.margin) f.ii = {true, d, pt.s};
    }
    const double term =
        (pt.s - s_plus) * (relative_entropy(model, u, pt.state) - eta_plus);
    if (term < f.ii_star.margin) f.ii_star = {true, term, pt.s};
  }

  f.i.pass = f.i.margin <= pol.band(f.i.margin);
  f.ii.pass = f.ii.margin >= -pol.band(f.ii.margin);
  f.ii_star.pass = f.ii_star.margin >= -pol.band(f.ii_star.margin);
  f.i_prime = {plus.sigma_tangent <= pol.band(plus.sigma_tangent), plus.sigma_tangent, s_plus};
  const double d_plus = relative_entropy_derivative(model, u, plus);
  f.ii_prime = {d_plus >= -pol.band(d_plus), d_plus, s_plus};
  return f;
}

}  // namespace shockstab
