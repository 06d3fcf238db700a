#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "shockstab/errors.hpp"
#include "shockstab/types.hpp"

namespace shockstab {

struct SpectralOptions {
  double eps_hyp = 1e-8;  // minimum eigenvalue gap, relative to |A|
  double eps_inv = 1e-8;  // resonance margin for shifted solves, relative to |A|
};

/// A(u) conjugated into the inner product induced by P(u) = L L^T.
/// M = L^-1 (P A) L^-T is symmetric whenever PA is, which is the
/// computational route to a guaranteed real spectrum.
struct SymmetrizedProblem {
  Vec state;
  Mat matrix;           // A(u)
  Mat symmetrizer;      // P(u)
  Mat cholesky_factor;  // lower-triangular L with P = L L^T
  Mat conjugated;       // M = L^-1 (P A) L^-T, symmetrized copy
  double symmetry_residual = 0.0;  // |M - M^T| / max(1, |A|) before symmetrization
};

inline SymmetrizedProblem make_symmetrized(const SystemModel& model, const Vec& u) {
  model.require_admissible(u, "make_symmetrized");
  SymmetrizedProblem sp;
  sp.state = u;
  sp.matrix = model.jacobian(u);
  sp.symmetrizer = model.entropy_hessian(u);
  if (!sp.matrix.allFinite() || !sp.symmetrizer.allFinite())
    throw EvalError("non-finite Jacobian or entropy Hessian at state " + format_state(u));

  Eigen::LLT<Mat> llt(sp.symmetrizer);
  if (llt.info() != Eigen::Success)
    throw SpectralError("entropy Hessian not positive definite at state " + format_state(u));
  sp.cholesky_factor = llt.matrixL();

  const Mat pa = sp.symmetrizer * sp.matrix;
  Mat m = sp.cholesky_factor.triangularView<Eigen::Lower>().solve(pa);
  m = sp.cholesky_factor.triangularView<Eigen::Lower>().solve(m.transpose()).transpose();
  sp.symmetry_residual = (m - m.transpose()).norm() / std::max(1.0, sp.matrix.norm());
  sp.conjugated = 0.5 * (m + m.transpose());
  return sp;
}

namespace detail {

// Largest-magnitude component positive; ties broken by the lowest index.
inline void fix_eigenvector_sign(Eigen::Ref<Vec> r) {
  Eigen::Index pick = 0;
  double best = std::abs(r[0]);
  for (Eigen::Index i = 1; i < r.size(); ++i) {
    if (std::abs(r[i]) > best) {
      best = std::abs(r[i]);
      pick = i;
    }
  }
  if (r[pick] < 0.0) r = -r;
}

}  // namespace detail

/// Eigen-decomposition of A(u) via the entropy symmetrizer. Eigenvalues come
/// out real and ascending; eigenvectors are normalized to <r_j, P r_j> = 1
/// with the sign convention of detail::fix_eigenvector_sign.
inline SpectralData eigen_decompose(const SystemModel& model, const Vec& u,
                                    const SpectralOptions& opt = {}) {
  const SymmetrizedProblem sp = make_symmetrized(model, u);
  Eigen::SelfAdjointEigenSolver<Mat> es(sp.conjugated);
  if (es.info() != Eigen::Success)
    throw SpectralError("symmetric eigensolver failed at state " + format_state(u));

  SpectralData out;
  out.state = u;
  out.eigenvalues = es.eigenvalues();

  const double gap_floor = opt.eps_hyp * std::max(1.0, sp.matrix.norm());
  for (Eigen::Index j = 0; j + 1 < out.eigenvalues.size(); ++j) {
    if (!(out.eigenvalues[j + 1] - out.eigenvalues[j] > gap_floor))
      throw SpectralError("strict hyperbolicity violated at state " + format_state(u) +
                          ": eigenvalue gap " +
                          std::to_string(out.eigenvalues[j + 1] - out.eigenvalues[j]) +
                          " between modes " + std::to_string(j + 1) + " and " +
                          std::to_string(j + 2));
  }

  // r_j = L^-T w_j maps orthonormal eigenvectors of M to P-orthonormal ones.
  out.eigenvectors = sp.cholesky_factor.transpose()
                         .triangularView<Eigen::Upper>()
                         .solve(es.eigenvectors());
  for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
    auto r = out.eigenvectors.col(j);
    const double pn = std::sqrt(r.dot(sp.symmetrizer * r));
    r /= pn;
    detail::fix_eigenvector_sign(r);
  }
  return out;
}

/// Flip eigenvector signs to continue the frame of a previous sample.
/// Determinant-valued criteria need a consistent frame along a curve.
inline SpectralData align_signs(SpectralData cur, const SpectralData& prev) {
  for (Eigen::Index j = 0; j < cur.eigenvectors.cols(); ++j) {
    if (cur.eigenvectors.col(j).dot(prev.eigenvectors.col(j)) < 0.0)
      cur.eigenvectors.col(j) = -cur.eigenvectors.col(j);
  }
  return cur;
}

/// Solve (A(u) - shift I) x = rhs. The shift must stay clear of the spectrum;
/// along a Lax 1-shock this holds at the right state by the Lax inequalities.
inline Vec solve_shifted(const SystemModel& model, const Vec& u, double shift,
                         const Vec& rhs, const SpectralOptions& opt = {}) {
  const SpectralData sd = eigen_decompose(model, u, opt);
  const Mat a = model.jacobian(u);
  const double scale = std::max(1.0, a.norm());
  for (Eigen::Index j = 0; j < sd.eigenvalues.size(); ++j) {
    if (std::abs(sd.eigenvalues[j] - shift) < opt.eps_inv * scale)
      throw SpectralError("shift resonant with spectrum: |a_" + std::to_string(j + 1) +
                          " - shift| = " + std::to_string(std::abs(sd.eigenvalues[j] - shift)) +
                          " at state " + format_state(u));
  }
  Mat shifted = a;
  shifted.diagonal().array() -= shift;
  Eigen::PartialPivLU<Mat> lu(shifted);
  Vec x = lu.solve(rhs);
  x += lu.solve(rhs - shifted * x);  // one step of iterative refinement
  return x;
}

/// det(c_1/|c_1|_P, ..., c_n/|c_n|_P) with |c|_P = sqrt(<c, Pc>).
/// Scale-invariant in each column by construction. An exactly zero (or
/// non-finite) column is rejected as degenerate, which is distinct from a
/// zero determinant of independent columns.
inline double normalized_determinant(const Mat& columns, const Mat& weights) {
  if (columns.rows() != columns.cols() || columns.rows() != weights.rows())
    throw EvalError("normalized_determinant: need n columns of dimension n");
  Mat unit = columns;
  for (Eigen::Index j = 0; j < unit.cols(); ++j) {
    const double nsq = unit.col(j).dot(weights * unit.col(j));
    if (!(nsq > 0.0) || !std::isfinite(nsq))
      throw SpectralError("degenerate column " + std::to_string(j + 1) +
                          " in normalized determinant");
    unit.col(j) /= std::sqrt(nsq);
  }
  return unit.determinant();
}

}  // namespace shockstab
