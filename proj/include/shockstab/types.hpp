#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shockstab/errors.hpp"

namespace shockstab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using ScalarFn = std::function<double(const Vec&)>;
using VectorFn = std::function<Vec(const Vec&)>;
using MatrixFn = std::function<Mat(const Vec&)>;
using PredicateFn = std::function<bool(const Vec&)>;

inline std::string format_state(const Vec& u) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (i) os << ", ";
    os << u[i];
  }
  os << ")";
  return os.str();
}

/// A system of conservation laws u_t + f(u)_x = 0 together with a strictly
/// convex entropy. The Hessian P = grad^2(eta) acts as the symmetrizer:
/// P > 0 and P*A symmetric at every admissible state. All callbacks must be
/// pure; instances are immutable after construction.
struct SystemModel {
  std::string name;
  int n = 0;                  // number of conserved quantities
  VectorFn flux;              // f(u)
  MatrixFn jacobian;          // A(u) = grad f(u)
  ScalarFn entropy;           // eta(u)
  VectorFn entropy_gradient;  // grad eta(u)
  MatrixFn entropy_hessian;   // P(u) = grad^2 eta(u)
  std::optional<ScalarFn> entropy_flux;  // q(u); only dissipation checks need it
  PredicateFn state_domain;   // admissible-state predicate; empty means "all finite"

  bool admissible(const Vec& u) const {
    if (u.size() != n || !u.allFinite()) return false;
    return state_domain ? state_domain(u) : true;
  }

  void require_admissible(const Vec& u, const char* where) const {
    if (!admissible(u))
      throw DomainError(std::string(where) + ": state " + format_state(u) +
                        " outside admissible domain of system '" + name + "'");
  }
};

/// One sample of the 1-Hugoniot curve: right state S, speed sigma and the
/// curve tangent at parameter s. Tangents are unit vectors in the product
/// metric |dS|^2 + dsigma^2, so s is pseudo-arclength in (S, sigma) space.
struct HugoniotPoint {
  double s = 0.0;
  Vec state;                   // S_u(s)
  double sigma = 0.0;          // sigma(s)
  Vec state_tangent;           // S'(s)
  double sigma_tangent = 0.0;  // sigma'(s)
  double rh_residual = 0.0;    // scaled RH residual recorded at acceptance
};

enum class StopReason {
  NotStarted,
  MaxArclength,
  DomainBoundary,
  LaxLoss,
  HyperbolicityLoss,
  Stalled,
  RankDeficient,
};

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::NotStarted: return "not_started";
    case StopReason::MaxArclength: return "max_arclength";
    case StopReason::DomainBoundary: return "domain_boundary";
    case StopReason::LaxLoss: return "lax_loss";
    case StopReason::HyperbolicityLoss: return "hyperbolicity_loss";
    case StopReason::Stalled: return "stalled";
    case StopReason::RankDeficient: return "rank_deficient";
  }
  return "unknown";
}

/// Orientation of the seed direction. Shock: the branch on which the speed
/// initially decreases (when the field is genuinely nonlinear); Expansion:
/// the opposite orientation.
enum class Branch { Shock, Expansion };

inline const char* to_string(Branch b) {
  return b == Branch::Shock ? "shock" : "expansion";
}

/// Ordered samples of the 1-Hugoniot curve anchored at a left state.
/// points[0] is the degenerate seed (s = 0, S = u, sigma = a_1(u)).
struct HugoniotCurve {
  Vec left_state;
  int family = 1;
  Branch branch = Branch::Shock;
  bool gnl_degenerate = false;  // seed had grad(a_1).r_1 ~ 0
  std::vector<HugoniotPoint> points;
  StopReason stop_reason = StopReason::NotStarted;
  std::string stop_detail;

  const HugoniotPoint& seed() const { return points.front(); }
  const HugoniotPoint& last() const { return points.back(); }
  double arclength() const { return points.empty() ? 0.0 : points.back().s; }
};

/// Eigen-decomposition of A(u) through the entropy symmetrizer: real
/// ascending eigenvalues and P-orthonormal eigenvector columns.
struct SpectralData {
  Vec state;
  Vec eigenvalues;   // a_1 < ... < a_n
  Mat eigenvectors;  // columns r_j, <r_i, P r_j> = delta_ij
};

struct ConditionFlags {
  bool lax = false;                        // all Lax margins strictly positive
  bool lopatinski = false;                 // |normalized det| above delta_lop
  bool speed_nonincreasing = false;        // sigma'(s) <= 0 within band
  bool rel_entropy_nondecreasing = false;  // d_s eta(u|S) >= 0 within band
  std::optional<bool> dissipative;         // [q] - sigma*[eta] <= 0; empty if q absent
};

/// Every criterion evaluated at one curve point, raw values plus flags.
/// Flags are a pure function of the raw values and the tolerance policy.
struct ConditionReport {
  HugoniotPoint point;
  Vec lax_margins;        // [a1(u)-sigma, sigma-a1(S), a2(S)-sigma, gaps...]
  double lopatinski_det = 0.0;
  double rel_entropy = 0.0;        // eta(u|S)
  double rel_entropy_deriv = 0.0;  // <S', P(S)(S-u)>
  double speed_deriv = 0.0;        // sigma'(s)
  std::optional<double> dissipation;  // [q] - sigma*[eta]
  Vec alpha;                       // expansion of S-u over the eigenbasis at S
  Vec beta;                        // alpha_j / (a_j(S) - sigma)
  double quadratic_form = 0.0;     // <S', P(S)(A(S)-sigma)S'>
  double lrh_residual = 0.0;       // |(A(S)-sigma)S' - sigma'(S-u)|
  ConditionFlags flags;
};

struct SampleValidation {
  Vec state;
  double p_asymmetry = 0.0;   // |P - P^T| / max(1, |P|)
  bool p_positive_definite = false;
  double pa_asymmetry = 0.0;  // |PA - (PA)^T| / max(1, |PA|)
  double flux_jacobian_error = 0.0;      // analytic vs central differences
  double entropy_gradient_error = 0.0;
  double entropy_hessian_error = 0.0;
  std::optional<double> entropy_flux_compat;  // |grad(eta) A - grad q| residual
  bool pass = false;
  std::string failure;
};

struct ValidationReport {
  std::vector<SampleValidation> samples;
  bool pass = false;
};

}  // namespace shockstab
