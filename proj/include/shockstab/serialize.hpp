#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shockstab/errors.hpp"
#include "shockstab/types.hpp"

namespace shockstab {

using OJson = nlohmann::ordered_json;

namespace detail {

// delimited tables carry 17 significant digits
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline OJson vec_to_json(const Vec& v) {
  OJson a = OJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vec vec_from_json(const nlohmann::json& a) {
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

}  // namespace detail

inline OJson to_json(const HugoniotPoint& p) {
  OJson j;
  j["s"] = p.s;
  j["state"] = detail::vec_to_json(p.state);
  j["sigma"] = p.sigma;
  j["state_tangent"] = detail::vec_to_json(p.state_tangent);
  j["sigma_tangent"] = p.sigma_tangent;
  j["rh_residual"] = p.rh_residual;
  return j;
}

inline HugoniotPoint point_from_json(const nlohmann::json& j) {
  HugoniotPoint p;
  p.s = j.at("s").get<double>();
  p.state = detail::vec_from_json(j.at("state"));
  p.sigma = j.at("sigma").get<double>();
  p.state_tangent = detail::vec_from_json(j.at("state_tangent"));
  p.sigma_tangent = j.at("sigma_tangent").get<double>();
  p.rh_residual = j.at("rh_residual").get<double>();
  return p;
}

inline OJson curve_header_json(const HugoniotCurve& c) {
  OJson j;
  j["format"] = "hugoniot_curve";
  j["family"] = c.family;
  j["branch"] = to_string(c.branch);
  j["gnl_degenerate"] = c.gnl_degenerate;
  j["left_state"] = detail::vec_to_json(c.left_state);
  j["stop_reason"] = to_string(c.stop_reason);
  j["stop_detail"] = c.stop_detail;
  return j;
}

inline OJson to_json(const HugoniotCurve& c) {
  OJson j = curve_header_json(c);
  OJson pts = OJson::array();
  for (const HugoniotPoint& p : c.points) pts.push_back(to_json(p));
  j["points"] = std::move(pts);
  return j;
}

inline void curve_header_from_json(const nlohmann::json& j, HugoniotCurve& c) {
  if (j.value("format", "") != std::string("hugoniot_curve"))
    throw ConfigError("curve document: wrong or missing format tag");
  c.family = j.at("family").get<int>();
  c.branch = j.at("branch").get<std::string>() == "expansion" ? Branch::Expansion
                                                              : Branch::Shock;
  c.gnl_degenerate = j.at("gnl_degenerate").get<bool>();
  c.left_state = detail::vec_from_json(j.at("left_state"));
  c.stop_detail = j.value("stop_detail", "");
  const std::string reason = j.at("stop_reason").get<std::string>();
  c.stop_reason = StopReason::NotStarted;
  for (StopReason r : {StopReason::MaxArclength, StopReason::DomainBoundary,
                       StopReason::LaxLoss, StopReason::HyperbolicityLoss,
                       StopReason::Stalled, StopReason::RankDeficient})
    if (reason == to_string(r)) c.stop_reason = r;
}

inline HugoniotCurve curve_from_json(const nlohmann::json& j) {
  HugoniotCurve c;
  curve_header_from_json(j, c);
  for (const auto& pj : j.at("points")) c.points.push_back(point_from_json(pj));
  return c;
}

/// Line-delimited form: one header record, then one record per curve point.
inline void write_curve_jsonl(std::ostream& os, const HugoniotCurve& c) {
  os << curve_header_json(c).dump() << '\n';
  for (const HugoniotPoint& p : c.points) os << to_json(p).dump() << '\n';
}

inline HugoniotCurve read_curve_jsonl(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("curve stream: empty input");
  HugoniotCurve c;
  curve_header_from_json(nlohmann::json::parse(line), c);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    c.points.push_back(point_from_json(nlohmann::json::parse(line)));
  }
  return c;
}

/// Tab-separated table: s, state, sigma, tangents, rh residual.
inline void write_curve_delimited(std::ostream& os, const HugoniotCurve& c) {
  const Eigen::Index n = c.left_state.size();
  os << "s";
  for (Eigen::Index i = 0; i < n; ++i) os << "\tS" << (i + 1);
  os << "\tsigma";
  for (Eigen::Index i = 0; i < n; ++i) os << "\tdS" << (i + 1);
  os << "\tdsigma\trh_residual\n";
  for (const HugoniotPoint& p : c.points) {
    os << detail::fmt17(p.s);
    for (Eigen::Index i = 0; i < n; ++i) os << '\t' << detail::fmt17(p.state[i]);
    os << '\t' << detail::fmt17(p.sigma);
    for (Eigen::Index i = 0; i < n; ++i) os << '\t' << detail::fmt17(p.state_tangent[i]);
    os << '\t' << detail::fmt17(p.sigma_tangent) << '\t' << detail::fmt17(p.rh_residual)
       << '\n';
  }
}

inline OJson to_json(const ConditionFlags& f) {
  OJson j;
  j["lax"] = f.lax;
  j["lopatinski"] = f.lopatinski;
  j["speed_nonincreasing"] = f.speed_nonincreasing;
  j["rel_entropy_nondecreasing"] = f.rel_entropy_nondecreasing;
  if (f.dissipative)
    j["dissipative"] = *f.dissipative;
  else
    j["dissipative"] = nullptr;
  return j;
}

inline ConditionFlags flags_from_json(const nlohmann::json& j) {
  ConditionFlags f;
  f.lax = j.at("lax").get<bool>();
  f.lopatinski = j.at("lopatinski").get<bool>();
  f.speed_nonincreasing = j.at("speed_nonincreasing").get<bool>();
  f.rel_entropy_nondecreasing = j.at("rel_entropy_nondecreasing").get<bool>();
  if (!j.at("dissipative").is_null()) f.dissipative = j.at("dissipative").get<bool>();
  return f;
}

inline OJson to_json(const ConditionReport& r) {
  OJson j;
  j["format"] = "condition_report";
  j["point"] = to_json(r.point);
  j["lax_margins"] = detail::vec_to_json(r.lax_margins);
  j["lopatinski_det"] = r.lopatinski_det;
  j["rel_entropy"] = r.rel_entropy;
  j["rel_entropy_deriv"] = r.rel_entropy_deriv;
  j["speed_deriv"] = r.speed_deriv;
  if (r.dissipation)
    j["dissipation"] = *r.dissipation;
  else
    j["dissipation"] = nullptr;
  j["alpha"] = detail::vec_to_json(r.alpha);
  j["beta"] = detail::vec_to_json(r.beta);
  j["quadratic_form"] = r.quadratic_form;
  j["lrh_residual"] = r.lrh_residual;
  j["flags"] = to_json(r.flags);
  return j;
}

inline ConditionReport report_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != std::string("condition_report"))
    throw ConfigError("report document: wrong or missing format tag");
  ConditionReport r;
  r.point = point_from_json(j.at("point"));
  r.lax_margins = detail::vec_from_json(j.at("lax_margins"));
  r.lopatinski_det = j.at("lopatinski_det").get<double>();
  r.rel_entropy = j.at("rel_entropy").get<double>();
  r.rel_entropy_deriv = j.at("rel_entropy_deriv").get<double>();
  r.speed_deriv = j.at("speed_deriv").get<double>();
  if (!j.at("dissipation").is_null()) r.dissipation = j.at("dissipation").get<double>();
  r.alpha = detail::vec_from_json(j.at("alpha"));
  r.beta = detail::vec_from_json(j.at("beta"));
  r.quadratic_form = j.at("quadratic_form").get<double>();
  r.lrh_residual = j.at("lrh_residual").get<double>();
  r.flags = flags_from_json(j.at("flags"));
  return r;
}

/// Plot-ready per-sample table of criterion profiles along a curve.
inline void write_profile_delimited(std::ostream& os,
                                    const std::vector<ConditionReport>& profile) {
  os << "s\tsigma\tsigma_prime\tds_rel_entropy\trel_entropy\tlopatinski\tlax_min\t"
        "dissipation\n";
  for (const ConditionReport& r : profile) {
    os << detail::fmt17(r.point.s) << '\t' << detail::fmt17(r.point.sigma) << '\t'
       << detail::fmt17(r.speed_deriv) << '\t' << detail::fmt17(r.rel_entropy_deriv) << '\t'
       << detail::fmt17(r.rel_entropy) << '\t' << detail::fmt17(r.lopatinski_det) << '\t'
       << detail::fmt17(r.lax_margins.minCoeff()) << '\t'
       << (r.dissipation ? detail::fmt17(*r.dissipation) : "nan") << '\n';
  }
}

inline OJson to_json(const SampleValidation& sv) {
  OJson j;
  j["state"] = detail::vec_to_json(sv.state);
  j["p_asymmetry"] = sv.p_asymmetry;
  j["p_positive_definite"] = sv.p_positive_definite;
  j["pa_asymmetry"] = sv.pa_asymmetry;
  j["flux_jacobian_error"] = sv.flux_jacobian_error;
  j["entropy_gradient_error"] = sv.entropy_gradient_error;
  j["entropy_hessian_error"] = sv.entropy_hessian_error;
  if (sv.entropy_flux_compat)
    j["entropy_flux_compat"] = *sv.entropy_flux_compat;
  else
    j["entropy_flux_compat"] = nullptr;
  j["pass"] = sv.pass;
  j["failure"] = sv.failure;
  return j;
}

inline OJson to_json(const ValidationReport& r) {
  OJson j;
  j["format"] = "validation_report";
  j["pass"] = r.pass;
  OJson samples = OJson::array();
  for (const SampleValidation& sv : r.samples) samples.push_back(to_json(sv));
  j["samples"] = std::move(samples);
  return j;
}

}  // namespace shockstab
