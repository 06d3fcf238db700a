#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "shockstab/errors.hpp"
#include "shockstab/spectral.hpp"
#include "shockstab/types.hpp"

namespace shockstab {

struct ContinuationConfig {
  double h0 = 1e-3;    // first step (analytic expansion off the degenerate seed)
  double h_min = 1e-9;
  double h_max = 0.1;
  double tol_rh = 1e-11;      // corrector residual, scaled by 1 + |f(S)-f(u)|
  double max_arclength = 1.0;
  int max_newton_iters = 8;
  int family = 1;
  bool stop_on_lax_loss = true;
  double lax_band = 1e-10;    // tolerance band before declaring Lax loss

  void validate() const {
    if (!(h_min > 0.0 && h_min <= h0 && h0 <= h_max))
      throw std::invalid_argument("ContinuationConfig: need 0 < h_min <= h0 <= h_max");
    if (!(tol_rh > 0.0)) throw std::invalid_argument("ContinuationConfig: tol_rh must be > 0");
    if (!(max_arclength > 0.0))
      throw std::invalid_argument("ContinuationConfig: max_arclength must be > 0");
    if (max_newton_iters < 2)
      throw std::invalid_argument("ContinuationConfig: max_newton_iters must be >= 2");
    if (family != 1) throw std::invalid_argument("ContinuationConfig: only family 1 is supported");
  }
};

/// Lax 1-shock margins, all of which must be positive:
/// [a_1(u) - sigma, sigma - a_1(S), a_2(S) - sigma, a_3(S)-a_2(S), ..., a_n(S)-a_{n-1}(S)].
/// The trailing entries restate strict hyperbolicity at S. For n = 1 only the
/// first two entries exist.
inline Vec lax_margins_of(double a1_left, double sigma, const Vec& right_eigenvalues) {
  const Eigen::Index n = right_eigenvalues.size();
  Vec m(n == 1 ? 2 : n + 1);
  m[0] = a1_left - sigma;
  m[1] = sigma - right_eigenvalues[0];
  if (n >= 2) {
    m[2] = right_eigenvalues[1] - sigma;
    for (Eigen::Index j = 2; j < n; ++j)
      m[1 + j] = right_eigenvalues[j] - right_eigenvalues[j - 1];
  }
  return m;
}

namespace detail {

struct CorrectorOutcome {
  Vec state;
  double sigma = 0.0;
  double scaled_residual = 0.0;  // |RH| / (1 + |f(S)-f(u)|)
  bool converged = false;
  bool domain_violation = false;
  int iterations = 0;
};

// Newton on the Rankine-Hugoniot system augmented with the arclength
// hyperplane <t, x - x_anchor> = ds. Accepts the best iterate that meets the
// residual tolerance, after one extra polishing step.
inline CorrectorOutcome correct_to_curve(const SystemModel& model, const Vec& u,
                                         Vec state, double sigma, const Vec& anchor_state,
                                         double anchor_sigma, const Vec& t_state,
                                         double t_sigma, double ds,
                                         const ContinuationConfig& cfg) {
  const Eigen::Index n = model.n;
  CorrectorOutcome out;
  const Vec f_left = model.flux(u);
  const double cons_tol = 1e-12 * (1.0 + std::abs(ds));

  Vec best_state = state;
  double best_sigma = sigma;
  double best_resid = std::numeric_limits<double>::infinity();
  bool met_tol = false;
  bool polished = false;

  Mat jac(n + 1, n + 1);
  Vec rhs(n + 1);
  for (int iter = 0; iter <= cfg.max_newton_iters; ++iter) {
    if (!model.admissible(state)) {
      out.domain_violation = true;
      return out;
    }
    Vec f_s;
    Mat a_s;
    try {
      f_s = model.flux(state);
      a_s = model.jacobian(state);
    } catch (const DomainError&) {
      out.domain_violation = true;
      return out;
    } catch (const EvalError&) {
      return out;
    }
    if (!f_s.allFinite() || !a_s.allFinite()) return out;

    const Vec rh = sigma * (state - u) - (f_s - f_left);
    const double scale = 1.0 + (f_s - f_left).norm();
    const double scaled = rh.norm() / scale;
    const double cons =
        t_state.dot(state - anchor_state) + t_sigma * (sigma - anchor_sigma) - ds;
    out.iterations = iter;

    if (scaled < best_resid && std::abs(cons) <= cons_tol) {
      best_resid = scaled;
      best_state = state;
      best_sigma = sigma;
    }
    if (scaled <= cfg.tol_rh && std::abs(cons) <= cons_tol) {
      if (polished) break;
      met_tol = true;
      polished = true;  // one more step sharpens the residual to rounding level
    }
    if (iter == cfg.max_newton_iters) break;

    jac.topLeftCorner(n, n) = sigma * Mat::Identity(n, n) - a_s;
    jac.topRightCorner(n, 1) = state - u;
    jac.bottomLeftCorner(1, n) = t_state.transpose();
    jac(n, n) = t_sigma;
    rhs.head(n) = -rh;
    rhs[n] = -cons;
    const Vec step = jac.partialPivLu().solve(rhs);
    if (!step.allFinite()) return out;
    if (step.norm() > 1e6 * (1.0 + state.norm() + std::abs(sigma))) return out;  // diverging
    state += step.head(n);
    sigma += step[n];
  }

  if (met_tol && best_resid <= cfg.tol_rh) {
    out.converged = true;
    out.state = best_state;
    out.sigma = best_sigma;
    out.scaled_residual = best_resid;
  }
  return out;
}

// Unit tangent of the RH solution set at (S, sigma): the null vector of the
// n x (n+1) Jacobian [sigma I - A(S) | S - u], oriented to continue t_prev.
inline bool curve_tangent(const SystemModel& model, const Vec& u, const Vec& state,
                          double sigma, const Vec& prev_t_state, double prev_t_sigma,
                          Vec& t_state, double& t_sigma, double* lrh_residual = nullptr) {
  const Eigen::Index n = model.n;
  const Mat a_s = model.jacobian(state);
  Mat jac(n + 1, n + 1);
  jac.topLeftCorner(n, n) = sigma * Mat::Identity(n, n) - a_s;
  jac.topRightCorner(n, 1) = state - u;
  jac.bottomLeftCorner(1, n) = prev_t_state.transpose();
  jac(n, n) = prev_t_sigma;

  Eigen::FullPivLU<Mat> lu(jac);
  if (!lu.isInvertible()) return false;
  Vec t = lu.solve(Vec::Unit(n + 1, n));
  const double norm = t.norm();
  if (!(norm > 0.0) || !t.allFinite()) return false;
  t /= norm;
  t_state = t.head(n);
  t_sigma = t[n];
  if (lrh_residual)
    *lrh_residual = ((a_s - sigma * Mat::Identity(n, n)) * t_state -
                     t_sigma * (state - u))
                        .norm();
  return true;
}

inline double eig_min(const SystemModel& model, const Vec& state) {
  return eigen_decompose(model, state).eigenvalues[0];
}

}  // namespace detail

/// Seeds a curve at its degenerate base point: s = 0, S = u, sigma = a_1(u).
/// The tangent comes from the local expansion sigma(s) ~ a_1 + (s/2) grad(a_1).r_1,
/// with grad(a_1).r_1 estimated by central differencing a_1 along r_1. The seed
/// direction is oriented so the speed initially decreases on the Shock branch;
/// when the field is not genuinely nonlinear the orientation falls back to the
/// eigenvector sign convention and the curve is flagged degenerate.
inline HugoniotCurve seed_curve(const SystemModel& model, const Vec& left_state,
                                Branch branch = Branch::Shock) {
  model.require_admissible(left_state, "seed_curve");
  const SpectralData sd = eigen_decompose(model, left_state);
  const double a1 = sd.eigenvalues[0];
  Vec dir = sd.eigenvectors.col(0);
  dir /= dir.norm();

  const double h = 1e-5 * (1.0 + left_state.norm());
  const double gnl =
      (detail::eig_min(model, left_state + h * dir) -
       detail::eig_min(model, left_state - h * dir)) /
      (2.0 * h);

  HugoniotCurve curve;
  curve.left_state = left_state;
  curve.branch = branch;
  const double gnl_floor = 1e-6 * (1.0 + std::abs(a1));
  curve.gnl_degenerate = std::abs(gnl) <= gnl_floor;

  double sign = 1.0;
  if (!curve.gnl_degenerate) sign = (gnl > 0.0) ? -1.0 : 1.0;
  if (branch == Branch::Expansion) sign = -sign;

  dir *= sign;
  const double sigma_rate = 0.5 * gnl * sign;
  const double norm = std::sqrt(1.0 + sigma_rate * sigma_rate);

  HugoniotPoint seed;
  seed.s = 0.0;
  seed.state = left_state;
  seed.sigma = a1;
  seed.state_tangent = dir / norm;
  seed.sigma_tangent = sigma_rate / norm;
  seed.rh_residual = 0.0;
  curve.points.push_back(std::move(seed));
  curve.stop_reason = StopReason::NotStarted;
  return curve;
}

/// Extends a seeded curve by pseudo-arclength continuation until
/// max_arclength, a domain boundary, loss of Lax 1-shock structure, loss of
/// strict hyperbolicity, a stall at h_min, or rank deficiency of the
/// linearized RH system. The reason is recorded on the curve, and every
/// accepted point satisfies the scaled RH residual bound.
inline HugoniotCurve& extend_curve(const SystemModel& model, HugoniotCurve& curve,
                                   const ContinuationConfig& cfg) {
  cfg.validate();
  if (curve.points.empty())
    throw std::invalid_argument("extend_curve: curve has no seed point");
  const Vec& u = curve.left_state;
  const double a1_left = detail::eig_min(model, u);

  double h = cfg.h0;
  StopReason reason = StopReason::NotStarted;
  std::string det;

  while (true) {
    const HugoniotPoint& tip = curve.points.back();
    const double remaining = cfg.max_arclength - tip.s;
    if (remaining <= cfg.max_arclength * 1e-12) {
      reason = StopReason::MaxArclength;
      break;
    }
    const double ds = std::min(h, remaining);

    Vec pred_state = tip.state + ds * tip.state_tangent;
    const double pred_sigma = tip.sigma + ds * tip.sigma_tangent;
    detail::CorrectorOutcome res =
        detail::correct_to_curve(model, u, pred_state, pred_sigma, tip.state, tip.sigma,
                                 tip.state_tangent, tip.sigma_tangent, ds, cfg);
    if (!res.converged) {
      if (h <= cfg.h_min * (1.0 + 1e-9)) {
        reason = res.domain_violation ? StopReason::DomainBoundary : StopReason::Stalled;
        std::ostringstream os;
        os << (res.domain_violation ? "domain boundary reached near s = "
                                    : "continuation stalled at s = ")
           << tip.s;
        det = os.str();
        break;
      }
      h = std::max(0.5 * h, cfg.h_min);
      continue;
    }

    SpectralData sd;
    try {
      sd = eigen_decompose(model, res.state);
    } catch (const SpectralError& e) {
      reason = StopReason::HyperbolicityLoss;
      det = e.what();
      break;
    }
    if (cfg.stop_on_lax_loss) {
      const Vec margins = lax_margins_of(a1_left, res.sigma, sd.eigenvalues);
      const double band =
          cfg.lax_band * (1.0 + std::abs(res.sigma) + sd.eigenvalues.cwiseAbs().maxCoeff());
      if (margins.minCoeff() < -band) {
        reason = StopReason::LaxLoss;
        std::ostringstream os;
        os << "Lax 1-shock structure lost beyond s = " << tip.s;
        det = os.str();
        break;
      }
    }

    HugoniotPoint pt;
    pt.state = res.state;
    pt.sigma = res.sigma;
    if (!detail::curve_tangent(model, u, pt.state, pt.sigma, tip.state_tangent,
                               tip.sigma_tangent, pt.state_tangent, pt.sigma_tangent)) {
      reason = StopReason::RankDeficient;
      std::ostringstream os;
      os << "linearized RH not uniquely solvable at s = " << tip.s + ds;
      det = os.str();
      break;
    }
    pt.s = tip.s + ds;
    pt.rh_residual = res.scaled_residual;
    curve.points.push_back(std::move(pt));

    if (res.iterations <= 3) h = std::min(2.0 * h, cfg.h_max);
  }

  curve.stop_reason = reason;
  curve.stop_detail = det;
  return curve;
}

inline HugoniotCurve trace_curve(const SystemModel& model, const Vec& left_state,
                                 const ContinuationConfig& cfg,
                                 Branch branch = Branch::Shock) {
  HugoniotCurve curve = seed_curve(model, left_state, branch);
  return extend_curve(model, curve, cfg);
}

/// Traces the Shock branch, plus the Expansion branch when the seed is not
/// genuinely nonlinear and the orientation choice is therefore ambiguous.
inline std::vector<HugoniotCurve> trace_curves(const SystemModel& model,
                                               const Vec& left_state,
                                               const ContinuationConfig& cfg) {
  std::vector<HugoniotCurve> out;
  out.push_back(trace_curve(model, left_state, cfg, Branch::Shock));
  if (out.front().gnl_degenerate)
    out.push_back(trace_curve(model, left_state, cfg, Branch::Expansion));
  return out;
}

/// Corrector-refined point at parameter anchor.s + ds, anchored at a specific
/// accepted sample. FD stencils along the curve should anchor all their
/// evaluations at the same sample so the parameterization has no kink inside
/// the stencil.
inline HugoniotPoint point_from_anchor(const SystemModel& model, const HugoniotCurve& curve,
                                       std::size_t anchor_index, double ds,
                                       double tol = 1e-13) {
  const HugoniotPoint& anchor = curve.points.at(anchor_index);
  if (ds == 0.0) return anchor;

  ContinuationConfig cfg;
  cfg.tol_rh = tol;
  cfg.max_newton_iters = 20;
  Vec pred_state = anchor.state + ds * anchor.state_tangent;
  const double pred_sigma = anchor.sigma + ds * anchor.sigma_tangent;
  detail::CorrectorOutcome res =
      detail::correct_to_curve(model, curve.left_state, pred_state, pred_sigma, anchor.state,
                               anchor.sigma, anchor.state_tangent, anchor.sigma_tangent, ds, cfg);
  if (!res.converged) {
    std::ostringstream os;
    os << "corrector failed to refine point at s = " << anchor.s + ds;
    throw ContinuationError(os.str());
  }
  HugoniotPoint pt;
  pt.s = anchor.s + ds;
  pt.state = res.state;
  pt.sigma = res.sigma;
  pt.rh_residual = res.scaled_residual;
  if (!detail::curve_tangent(model, curve.left_state, pt.state, pt.sigma, anchor.state_tangent,
                             anchor.sigma_tangent, pt.state_tangent, pt.sigma_tangent))
    throw ContinuationError("linearized RH not uniquely solvable at refined point");
  return pt;
}

/// Corrector-refined point at parameter s, anchored at the nearest accepted
/// sample. s must lie within the traced range.
inline HugoniotPoint point_at(const SystemModel& model, const HugoniotCurve& curve, double s,
                              double tol = 1e-13) {
  if (curve.points.empty()) throw std::invalid_argument("point_at: empty curve");
  const double s_end = curve.points.back().s;
  if (s < 0.0 || s > s_end * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "parameter s = " << s << " outside traced range [0, " << s_end << "]";
    throw ContinuationError(os.str());
  }
  auto it = std::lower_bound(curve.points.begin(), curve.points.end(), s,
                             [](const HugoniotPoint& p, double v) { return p.s < v; });
  std::size_t hi = std::min<std::size_t>(it - curve.points.begin(), curve.points.size() - 1);
  std::size_t lo = hi > 0 ? hi - 1 : 0;
  const std::size_t anchor =
      (s - curve.points[lo].s <= curve.points[hi].s - s) ? lo : hi;
  const double ds = s - curve.points[anchor].s;
  if (std::abs(ds) <= 1e-15 * std::max(1.0, s)) return curve.points[anchor];
  return point_from_anchor(model, curve, anchor, ds, tol);
}

/// Refines the parameter where target(point) crosses zero, by bisection on the
/// continuation corrector. An exact zero at a stored sample is returned as-is.
inline HugoniotPoint locate_parameter(const SystemModel& model, const HugoniotCurve& curve,
                                      const std::function<double(const HugoniotPoint&)>& target,
                                      double s_tol = 1e-12) {
  if (curve.points.empty()) throw std::invalid_argument("locate_parameter: empty curve");
  std::vector<double> values(curve.points.size());
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    values[i] = target(curve.points[i]);
    if (values[i] == 0.0) return curve.points[i];
  }
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    if (values[i] * values[i + 1] > 0.0) continue;
    double lo = curve.points[i].s, hi = curve.points[i + 1].s;
    double g_lo = values[i];
    for (int iter = 0; iter < 200 && hi - lo > s_tol * std::max(1.0, std::abs(hi)); ++iter) {
      const double mid = 0.5 * (lo + hi);
      const HugoniotPoint pm = point_at(model, curve, mid);
      const double gm = target(pm);
      if (gm == 0.0) return pm;
      if ((gm > 0.0) == (g_lo > 0.0)) {
        lo = mid;
        g_lo = gm;
      } else {
        hi = mid;
      }
    }
    return point_at(model, curve, 0.5 * (lo + hi));
  }
  throw ContinuationError("target not on traced segment");
}

}  // namespace shockstab
