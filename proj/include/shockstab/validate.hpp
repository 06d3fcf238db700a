#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "shockstab/errors.hpp"
#include "shockstab/types.hpp"

namespace shockstab {

namespace detail {

inline double fd_step(double coord, double h_rel) {
  return h_rel * (1.0 + std::abs(coord));
}

inline Vec fd_gradient(const ScalarFn& f, const Vec& u, double h_rel) {
  Vec g(u.size());
  Vec up = u, dn = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double h = fd_step(u[i], h_rel);
    up[i] = u[i] + h;
    dn[i] = u[i] - h;
    g[i] = (f(up) - f(dn)) / (2.0 * h);
    up[i] = u[i];
    dn[i] = u[i];
  }
  return g;
}

inline Mat fd_jacobian(const VectorFn& f, const Vec& u, double h_rel) {
  Mat j(u.size(), u.size());
  Vec up = u, dn = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double h = fd_step(u[i], h_rel);
    up[i] = u[i] + h;
    dn[i] = u[i] - h;
    j.col(i) = (f(up) - f(dn)) / (2.0 * h);
    up[i] = u[i];
    dn[i] = u[i];
  }
  return j;
}

inline double relative_matrix_error(const Mat& got, const Mat& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

}  // namespace detail

struct ValidationTolerances {
  double p_asymmetry = 1e-12;       // relative to |P|
  double pa_asymmetry = 1e-8;       // relative to |PA|
  double derivative_consistency = 1e-6;  // analytic vs central differences
  double fd_step = 6e-6;            // relative FD step (~cbrt of machine eps)
};

/// Checks the entropy structure and derivative consistency of a model at the
/// given sample states: P symmetric positive definite, PA symmetric, analytic
/// Jacobian/gradient/Hessian against central differences, and (when an
/// entropy flux is present) grad(eta) A = grad(q).
inline ValidationReport validate_system(const SystemModel& model,
                                        const std::vector<Vec>& samples,
                                        const ValidationTolerances& tol = {}) {
  ValidationReport report;
  report.pass = true;
  for (const Vec& u : samples) {
    model.require_admissible(u, "validate_system");
    SampleValidation sv;
    sv.state = u;

    const Mat p = model.entropy_hessian(u);
    const Mat a = model.jacobian(u);
    const Vec f = model.flux(u);
    const Vec grad = model.entropy_gradient(u);
    if (!p.allFinite() || !a.allFinite() || !f.allFinite() || !grad.allFinite() ||
        !std::isfinite(model.entropy(u)))
      throw EvalError("non-finite evaluation at state " + format_state(u));

    sv.p_asymmetry = (p - p.transpose()).norm() / std::max(1.0, p.norm());
    sv.p_positive_definite = Eigen::LLT<Mat>(p).info() == Eigen::Success;

    const Mat pa = p * a;
    sv.pa_asymmetry = (pa - pa.transpose()).norm() / std::max(1.0, pa.norm());

    sv.flux_jacobian_error =
        detail::relative_matrix_error(detail::fd_jacobian(model.flux, u, tol.fd_step), a);
    sv.entropy_gradient_error =
        (detail::fd_gradient(model.entropy, u, tol.fd_step) - grad).norm() /
        std::max(1.0, grad.norm());
    sv.entropy_hessian_error = detail::relative_matrix_error(
        detail::fd_jacobian(model.entropy_gradient, u, tol.fd_step), p);

    if (model.entropy_flux) {
      const Vec grad_q = detail::fd_gradient(*model.entropy_flux, u, tol.fd_step);
      sv.entropy_flux_compat =
          (grad.transpose() * a - grad_q.transpose()).norm() / std::max(1.0, grad_q.norm());
    }

    sv.pass = true;
    if (!sv.p_positive_definite) {
      sv.pass = false;
      sv.failure = "entropy Hessian not positive definite";
    } else if (sv.p_asymmetry > tol.p_asymmetry) {
      sv.pass = false;
      sv.failure = "entropy Hessian asymmetric";
    } else if (sv.pa_asymmetry > tol.pa_asymmetry) {
      sv.pass = false;
      sv.failure = "PA asymmetric: entropy is not compatible with the flux";
    } else if (sv.flux_jacobian_error > tol.derivative_consistency) {
      sv.pass = false;
      sv.failure = "flux Jacobian inconsistent with finite differences";
    } else if (sv.entropy_gradient_error > tol.derivative_consistency) {
      sv.pass = false;
      sv.failure = "entropy gradient inconsistent with finite differences";
    } else if (sv.entropy_hessian_error > tol.derivative_consistency) {
      sv.pass = false;
      sv.failure = "entropy Hessian inconsistent with finite differences";
    } else if (sv.entropy_flux_compat &&
               *sv.entropy_flux_compat > tol.derivative_consistency) {
      sv.pass = false;
      sv.failure = "entropy flux incompatible: grad(eta) A != grad(q)";
    }
    report.pass = report.pass && sv.pass;
    report.samples.push_back(std::move(sv));
  }
  return report;
}

}  // namespace shockstab
