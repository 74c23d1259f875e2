#pragma once

// Dense primal-dual interior-point solver for
//
//     min <C, X>  s.t.  <A_i, X> = b_i,  X PSD
//     max b'y     s.t.  sum_i y_i A_i + Z = C,  Z PSD
//
// Infeasible-start path following with the HKM search direction and a
// Mehrotra predictor-corrector step. The constraint matrices are kept as
// sparse triplet lists because Gram constraints touch only a few entries.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncsos {

struct SdpConstraint {
  // Full symmetric pattern: an off-diagonal value appears at (r, c) and (c, r).
  std::vector<Eigen::Triplet<double>> entries;
  double rhs = 0;

  static SdpConstraint from_dense(const Eigen::MatrixXd& a, double rhs) {
    SdpConstraint c;
    c.rhs = rhs;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        if (a(i, j) != 0.0) c.entries.emplace_back(i, j, a(i, j));
    return c;
  }

  Eigen::MatrixXd to_dense(Eigen::Index dim) const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& t : entries) a(t.row(), t.col()) += t.value();
    return a;
  }

  /// <A, G> for any square G (only the symmetric part of G matters).
  double inner(const Eigen::MatrixXd& g) const {
    double s = 0;
    for (const auto& t : entries) s += t.value() * g(t.row(), t.col());
    return s;
  }
};

struct SdpProblem {
  Eigen::Index dim = 0;
  Eigen::MatrixXd objective;
  std::vector<SdpConstraint> constraints;

  void validate() const {
    if (dim < 1) throw std::invalid_argument("SDP dimension must be positive");
    if (objective.rows() != dim || objective.cols() != dim)
      throw std::invalid_argument("objective has the wrong size");
    if ((objective - objective.transpose()).cwiseAbs().maxCoeff() > 0)
      throw std::invalid_argument("objective is not symmetric");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const auto a = constraints[i].to_dense(dim);
      for (const auto& t : constraints[i].entries)
        if (t.row() < 0 || t.col() < 0 || t.row() >= dim || t.col() >= dim)
          throw std::invalid_argument("constraint " + std::to_string(i) + " out of range");
      if ((a - a.transpose()).cwiseAbs().maxCoeff() > 0)
        throw std::invalid_argument("constraint " + std::to_string(i) + " is not symmetric");
    }
  }
};

enum class SdpStatus { Optimal, Infeasible, MaxIterations };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

struct SdpOptions {
  double feas_tol = 1e-9;
  double psd_tol = 1e-9;
  double gap_tol = 1e-9;
  int max_iter = 200;
  // Multiplies the default starting point X = alpha I, Z = beta I.
  double initial_scale = 1.0;
  // Threshold on lambda_min(-sum y_i A_i) for a normalized Farkas certificate b'y = 1.
  double infeasibility_tol = 1e-8;
};

struct SdpSolution {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::MatrixXd z;
  double objective = 0;
  double dual_objective = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  double gap = 0;
  double min_eigenvalue = 0;
  int iterations = 0;
  SdpStatus status = SdpStatus::MaxIterations;
};

inline double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// sup{t >= 0 : X + tN PSD}, taken over the range of X: with X = U L Uᵀ on
/// its numerically nonzero eigenvalues this is 1 / max(0, -lambda_min(L^-1/2
/// Uᵀ N U L^-1/2)). Returns +infinity when N is PSD on that range.
inline double max_step_to_boundary(const Eigen::MatrixXd& x, const Eigen::MatrixXd& n,
                                   double range_tol = 1e-12) {
  if (x.rows() != x.cols() || n.rows() != x.rows() || n.cols() != x.cols())
    throw std::invalid_argument("max_step_to_boundary: size mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  const auto& ev = es.eigenvalues();
  const double top = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > range_tol * std::max(top, 1e-300)) keep.push_back(i);
  if (keep.empty()) return n.isZero(0) ? std::numeric_limits<double>::infinity() : 0.0;
  Eigen::MatrixXd w(x.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    w.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]) / std::sqrt(ev(keep[k]));
  const Eigen::MatrixXd reduced = w.transpose() * n * w;
  const double lo = min_eigenvalue(0.5 * (reduced + reduced.transpose()));
  if (lo >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / lo;
}

namespace detail {

// Step for a positive definite X along D via the Cholesky factor of X.
inline double pd_step(const Eigen::LLT<Eigen::MatrixXd>& chol, const Eigen::MatrixXd& d) {
  Eigen::MatrixXd w = chol.matrixL().solve(d);
  w = chol.matrixL().solve(w.transpose()).transpose();
  const double lo = min_eigenvalue(0.5 * (w + w.transpose()));
  if (lo >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / lo;
}

inline Eigen::MatrixXd adjoint_map(const SdpProblem& p, const Eigen::VectorXd& y) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p.dim, p.dim);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi == 0) continue;
    for (const auto& t : p.constraints[i].entries) s(t.row(), t.col()) += yi * t.value();
  }
  return s;
}

inline Eigen::VectorXd forward_map(const SdpProblem& p, const Eigen::MatrixXd& g) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(p.constraints.size()));
  for (std::size_t i = 0; i < p.constraints.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = p.constraints[i].inner(g);
  return out;
}

}  // namespace detail

/// Solves the SDP. Deterministic for identical inputs.
inline SdpSolution solve(const SdpProblem& prob, const SdpOptions& opt = {}) {
  prob.validate();
  const Eigen::Index m = prob.dim;
  const auto ncons = static_cast<Eigen::Index>(prob.constraints.size());
  const double md = static_cast<double>(m);

  Eigen::VectorXd b(ncons);
  double ratio = 0, max_a_norm = 0;
  for (Eigen::Index i = 0; i < ncons; ++i) {
    const auto& c = prob.constraints[static_cast<std::size_t>(i)];
    b(i) = c.rhs;
    double fro = 0;
    for (const auto& t : c.entries) fro += t.value() * t.value();
    fro = std::sqrt(fro);
    max_a_norm = std::max(max_a_norm, fro);
    ratio = std::max(ratio, (1 + std::abs(c.rhs)) / (1 + fro));
  }
  const double alpha =
      opt.initial_scale * std::max({10.0, std::sqrt(md), md * ratio});
  const double beta =
      opt.initial_scale * std::max({10.0, std::sqrt(md), prob.objective.norm(), max_a_norm}) / std::sqrt(md);

  Eigen::MatrixXd x = alpha * Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd z = beta * Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(ncons);
  const Eigen::MatrixXd& c = prob.objective;
  const double c_scale = 1 + c.cwiseAbs().maxCoeff();

  SdpSolution sol;
  auto fill = [&](const Eigen::MatrixXd& fx, const Eigen::VectorXd& fy,
                  const Eigen::MatrixXd& fz, SdpStatus status, int iter) {
    sol.x = fx;
    sol.y = fy;
    sol.z = fz;
    sol.objective = c.cwiseProduct(fx).sum();
    sol.dual_objective = b.dot(fy);
    const Eigen::VectorXd rp = b - detail::forward_map(prob, fx);
    sol.primal_residual = ncons ? rp.cwiseAbs().maxCoeff() : 0.0;
    sol.dual_residual = (c - detail::adjoint_map(prob, fy) - fz).cwiseAbs().maxCoeff();
    sol.gap = fx.cwiseProduct(fz).sum() /
              (1 + std::abs(sol.objective) + std::abs(sol.dual_objective));
    sol.min_eigenvalue = min_eigenvalue(fx);
    sol.iterations = iter;
    sol.status = status;
  };

  // Best iterate so far by the worst of the three scaled optimality measures;
  // returned when the iteration breaks down near the optimum.
  const double b_scale = 1 + (ncons ? b.cwiseAbs().maxCoeff() : 0.0);
  double best_merit = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best_x = x, best_z = z;
  Eigen::VectorXd best_y = y;
  int best_iter = 0, since_best = 0;

  // Least-squares correction A*(G^+ r), G_ij = <A_i, A_j>: the smallest
  // symmetric D with A(D) = r.
  std::optional<Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>> gram_fact;
  auto correction = [&](const Eigen::VectorXd& r) -> Eigen::MatrixXd {
    if (!gram_fact) {
      Eigen::MatrixXd gm(ncons, ncons);
      for (Eigen::Index j = 0; j < ncons; ++j)
        gm.col(j) = detail::forward_map(prob, detail::adjoint_map(prob, Eigen::VectorXd::Unit(ncons, j)));
      gram_fact.emplace(gm);
    }
    const Eigen::MatrixXd d = detail::adjoint_map(prob, gram_fact->solve(r));
    return 0.5 * (d + d.transpose());
  };
  // With large right-hand sides the iteration alone cannot push the absolute
  // residual below feas_tol. Empty when there are no constraints.
  auto project = [&](Eigen::MatrixXd v) {
    if (ncons == 0) return Eigen::MatrixXd();
    for (int round = 0; round < 3; ++round) {
      const Eigen::VectorXd r = b - detail::forward_map(prob, v);
      if (r.cwiseAbs().maxCoeff() <= 0.01 * opt.feas_tol) break;
      v += correction(r);
    }
    return v;
  };

  const double tau = 0.98;
  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    const Eigen::VectorXd rp = b - detail::forward_map(prob, x);
    const Eigen::MatrixXd rd = c - detail::adjoint_map(prob, y) - z;
    const double pobj = c.cwiseProduct(x).sum();
    const double dobj = b.dot(y);
    const double xz = x.cwiseProduct(z).sum();
    const double mu = xz / md;
    const double primal_res = ncons ? rp.cwiseAbs().maxCoeff() : 0.0;
    const double dual_res = rd.cwiseAbs().maxCoeff();
    const double rel = 1 + std::abs(pobj) + std::abs(dobj);

    if (dual_res <= opt.feas_tol * c_scale && xz / rel <= opt.gap_tol &&
        std::abs(pobj - dobj) / rel <= opt.gap_tol) {
      if (primal_res <= opt.feas_tol) {
        fill(x, y, z, SdpStatus::Optimal, iter);
        return sol;
      }
      const Eigen::MatrixXd xp = project(x);
      if (xp.size() && (b - detail::forward_map(prob, xp)).cwiseAbs().maxCoeff() <= opt.feas_tol &&
          min_eigenvalue(xp) >= -opt.psd_tol) {
        fill(xp, y, z, SdpStatus::Optimal, iter);
        return sol;
      }
    }

    const double merit =
        std::max({primal_res / b_scale, dual_res / c_scale, xz / rel, std::abs(pobj - dobj) / rel});
    if (merit < best_merit) {
      best_merit = merit;
      best_x = x;
      best_y = y;
      best_z = z;
      best_iter = iter;
      since_best = 0;
    } else if (++since_best >= 5) {
      break;
    }

    // Farkas test: b'y > 0 with -sum y_i A_i PSD certifies primal infeasibility.
    // For any feasible X, <S, X> = -1, so lambda_min(S) <= -1/tr(X): an
    // absolute threshold cannot fire on a feasible problem of moderate size.
    if (dobj > 0 && ncons > 0) {
      const Eigen::MatrixXd s = -detail::adjoint_map(prob, y / dobj);
      if (min_eigenvalue(s) >= -opt.infeasibility_tol) {
        fill(x, y, z, SdpStatus::Infeasible, iter);
        return sol;
      }
    }

    Eigen::LLT<Eigen::MatrixXd> zchol(z);
    Eigen::LLT<Eigen::MatrixXd> xchol(x);
    if (zchol.info() != Eigen::Success || xchol.info() != Eigen::Success) break;
    const Eigen::MatrixXd zinv = zchol.solve(Eigen::MatrixXd::Identity(m, m));

    // Schur complement M_ij = <A_i, X A_j Z^-1>.
    Eigen::MatrixXd schur(ncons, ncons);
    for (Eigen::Index j = 0; j < ncons; ++j) {
      const auto& aj = prob.constraints[static_cast<std::size_t>(j)].entries;
      for (Eigen::Index i = 0; i <= j; ++i) {
        const auto& ai = prob.constraints[static_cast<std::size_t>(i)].entries;
        double s = 0;
        for (const auto& ei : ai)
          for (const auto& ej : aj)
            s += ei.value() * ej.value() * x(ei.row(), ej.row()) * zinv(ej.col(), ei.col());
        schur(i, j) = s;
        schur(j, i) = s;
      }
    }
    // Degenerate faces make M singular; a growing diagonal shift keeps the
    // factorization defined.
    Eigen::LLT<Eigen::MatrixXd> schur_fact;
    if (ncons) {
      const double diag = std::max(schur.diagonal().cwiseAbs().maxCoeff(), 1e-300);
      schur_fact.compute(schur);
      for (double shift = 1e-14; schur_fact.info() != Eigen::Success && shift < 1e-2; shift *= 100)
        schur_fact.compute(schur + shift * diag * Eigen::MatrixXd::Identity(ncons, ncons));
      if (schur_fact.info() != Eigen::Success) break;
    }

    const Eigen::MatrixXd x_rd_zinv = x * rd * zinv;
    auto direction = [&](const Eigen::MatrixXd& target, Eigen::MatrixXd& dx,
                         Eigen::VectorXd& dy, Eigen::MatrixXd& dz) {
      const Eigen::VectorXd rhs = rp - detail::forward_map(prob, target) +
                                  detail::forward_map(prob, x) +
                                  detail::forward_map(prob, x_rd_zinv);
      dy = ncons ? Eigen::VectorXd(schur_fact.solve(rhs)) : Eigen::VectorXd();
      for (int r = 0; r < 2 && ncons; ++r) dy += schur_fact.solve(rhs - schur * dy);
      dz = rd - detail::adjoint_map(prob, dy);
      dx = target - x - x * dz * zinv;
      dx = 0.5 * (dx + dx.transpose()).eval();
      // M is badly conditioned near the optimum and dy carries its error into
      // A(dX); restore A(dX) = rp so primal feasibility is not lost.
      if (ncons) dx += correction(rp - detail::forward_map(prob, dx));
    };

    Eigen::MatrixXd dxa, dza;
    Eigen::VectorXd dya;
    direction(Eigen::MatrixXd::Zero(m, m), dxa, dya, dza);
    const double ap_aff = std::min(1.0, detail::pd_step(xchol, dxa));
    const double ad_aff = std::min(1.0, detail::pd_step(zchol, dza));
    const double mu_aff = (x + ap_aff * dxa).cwiseProduct(z + ad_aff * dza).sum() / md;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    const Eigen::MatrixXd target =
        (sigma * mu * Eigen::MatrixXd::Identity(m, m) - dxa * dza) * zinv;
    Eigen::MatrixXd dx, dz;
    Eigen::VectorXd dy;
    direction(target, dx, dy, dz);
    double ap = std::min(1.0, tau * detail::pd_step(xchol, dx));
    double ad = std::min(1.0, tau * detail::pd_step(zchol, dz));
    // A short corrector step means the iterate has drifted off the central
    // path; a plain centering direction usually recovers it.
    if (std::min(ap, ad) < 0.2) {
      Eigen::MatrixXd cx, cz;
      Eigen::VectorXd cy;
      direction(std::max(sigma, 0.5) * mu * zinv, cx, cy, cz);
      const double cap = std::min(1.0, tau * detail::pd_step(xchol, cx));
      const double cad = std::min(1.0, tau * detail::pd_step(zchol, cz));
      if (std::min(cap, cad) > std::min(ap, ad)) {
        dx = cx, dy = cy, dz = cz;
        ap = cap, ad = cad;
      }
    }
    if (ap < 1e-12 && ad < 1e-12) break;

    x += ap * dx;
    x = 0.5 * (x + x.transpose()).eval();
    if (ncons) y += ad * dy;
    z += ad * dz;
    z = 0.5 * (z + z.transpose()).eval();
  }
  fill(best_x, best_y, best_z, SdpStatus::MaxIterations, best_iter);
  if (sol.primal_residual > opt.feas_tol) {
    const Eigen::MatrixXd xp = project(best_x);
    if (xp.size() && min_eigenvalue(xp) >= std::min(sol.min_eigenvalue, -opt.psd_tol) &&
        (b - detail::forward_map(prob, xp)).cwiseAbs().maxCoeff() < sol.primal_residual)
      fill(xp, best_y, best_z, SdpStatus::MaxIterations, best_iter);
  }
  const bool meets = sol.primal_residual <= opt.feas_tol && sol.min_eigenvalue >= -opt.psd_tol &&
                     sol.dual_residual <= opt.feas_tol * c_scale && sol.gap <= opt.gap_tol;
  if (meets) sol.status = SdpStatus::Optimal;
  sol.iterations = iter;
  return sol;
}

}  // namespace ncsos
