#pragma once

// Sum-of-squares decompositions p = sum_i f_i* f_i through a PSD Gram matrix:
// trace minimization over the PSD slice of the Gram space, rank reduction by
// stepping to the PSD boundary along Gram-kernel directions, and square
// extraction from a factor of the final Gram matrix.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ncsos/gram.hpp"
#include "ncsos/ncpoly.hpp"
#include "ncsos/sdp.hpp"

namespace ncsos {

struct SosOptions {
  // Eigenvalues below rank_tol * lambda_max are treated as zero.
  double rank_tol = 1e-7;
  SdpOptions sdp;
  // Grid refinement runs only when the kernel is at most this large.
  std::size_t refine_max_kernel = 3;
  int refine_rounds = 20;
  // Log-det reweighting rounds (objective (X_k + delta I)^-1) while the rank
  // stays above the certified lower bound; 0 disables.
  int reweight_rounds = 6;
  double reweight_delta = 1e-3;
  // Decompositions whose re-expansion misses p by more than this are rejected.
  double accept_error = 1e-6;
};

struct SosDecomposition {
  std::vector<RealPoly> squares;
  Eigen::MatrixXd gram;
  RankCertificate certificate;
  double reconstruction_error = 0;
};

enum class SosStatus { Decomposed, Infeasible, SolverFailure };

inline const char* to_string(SosStatus s) {
  switch (s) {
    case SosStatus::Decomposed: return "ok";
    case SosStatus::Infeasible: return "infeasible";
    case SosStatus::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

struct SosOutcome {
  SosStatus status = SosStatus::SolverFailure;
  std::optional<SosDecomposition> decomposition;
  RankCertificate certificate;
  SdpSolution sdp;
};

/// Basis positions whose Gram row may be nonzero in a PSD Gram matrix.
/// A diagonal entry alone in its orbit is fixed to the coefficient of v_i* v_i;
/// when that is zero the whole row vanishes in every PSD solution, which can
/// in turn isolate further diagonal entries. A negative fixed diagonal entry,
/// or an orbit with a nonzero target and no remaining cell, proves that no
/// PSD Gram matrix exists.
struct GramSupport {
  std::vector<bool> active;
  bool infeasible = false;

  std::size_t count() const {
    return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
  }
};

inline GramSupport prune_gram_support(const GramSpace& g) {
  GramSupport sup;
  sup.active.assign(g.basis().size(), true);
  bool changed = true;
  while (changed && !sup.infeasible) {
    changed = false;
    for (const auto& o : g.orbits()) {
      std::size_t live = 0;
      const GramCell* only = nullptr;
      for (const auto& c : o.cells)
        if (sup.active[c.row] && sup.active[c.col]) {
          ++live;
          only = &c;
        }
      if (live == 0 && sgn(o.target) != 0) {
        sup.infeasible = true;
        break;
      }
      if (live == 1 && only->row == only->col) {
        if (sgn(o.target) < 0) {
          sup.infeasible = true;
          break;
        }
        if (sgn(o.target) == 0) {
          sup.active[only->row] = false;
          changed = true;
        }
      }
    }
  }
  return sup;
}

/// min tr(X) s.t. one equality per word orbit, X PSD, over the active
/// positions of `sup` (all positions when sup is null).
inline SdpProblem trace_problem(const GramSpace& g, const GramSupport* sup = nullptr) {
  const std::size_t m = g.basis().size();
  std::vector<Eigen::Index> pos(m, -1);
  Eigen::Index dim = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (!sup || sup->active[i]) pos[i] = dim++;
  SdpProblem prob;
  prob.dim = dim;
  prob.objective = Eigen::MatrixXd::Identity(dim, dim);
  for (const auto& o : g.orbits()) {
    SdpConstraint c;
    c.rhs = o.target.get_d();
    for (std::size_t k = 0; k < o.cells.size(); ++k) {
      const auto r = pos[o.cells[k].row];
      const auto col = pos[o.cells[k].col];
      if (r < 0 || col < 0) continue;
      const double w = o.weights[k];
      if (r == col) {
        c.entries.emplace_back(r, r, w);
      } else {
        c.entries.emplace_back(r, col, w / 2);
        c.entries.emplace_back(col, r, w / 2);
      }
    }
    if (!c.entries.empty()) prob.constraints.push_back(std::move(c));
  }
  return prob;
}

/// Places a solution over the active positions back into the full basis.
inline Eigen::MatrixXd embed_support(const Eigen::MatrixXd& reduced, const GramSupport& sup) {
  const auto m = static_cast<Eigen::Index>(sup.active.size());
  std::vector<Eigen::Index> full;
  for (Eigen::Index i = 0; i < m; ++i)
    if (sup.active[static_cast<std::size_t>(i)]) full.push_back(i);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < full.size(); ++i)
    for (std::size_t j = 0; j < full.size(); ++j)
      x(full[i], full[j]) = reduced(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return x;
}

/// The active-by-active submatrix of a full Gram-sized matrix.
inline Eigen::MatrixXd restrict_support(const Eigen::MatrixXd& full, const GramSupport& sup) {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < sup.active.size(); ++i)
    if (sup.active[i]) idx.push_back(static_cast<Eigen::Index>(i));
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) out(i, j) = full(idx[i], idx[j]);
  return out;
}

/// Largest violation of the orbit constraints by a floating-point Gram matrix.
inline double gram_residual(const GramSpace& g, const Eigen::MatrixXd& x) {
  double worst = 0;
  for (const auto& o : g.orbits()) {
    double s = 0;
    for (std::size_t k = 0; k < o.cells.size(); ++k)
      s += o.weights[k] * x(static_cast<Eigen::Index>(o.cells[k].row),
                            static_cast<Eigen::Index>(o.cells[k].col));
    worst = std::max(worst, std::abs(s - o.target.get_d()));
  }
  return worst;
}

/// Frobenius-nearest point of the Gram space (orbit by orbit). With a
/// support, only entries between active positions move.
inline Eigen::MatrixXd project_to_gram_space(const GramSpace& g, Eigen::MatrixXd x,
                                             const GramSupport* sup = nullptr) {
  x = 0.5 * (x + x.transpose()).eval();
  auto live = [sup](const GramCell& c) {
    return !sup || (sup->active[c.row] && sup->active[c.col]);
  };
  for (const auto& o : g.orbits()) {
    double s = 0, denom = 0;
    for (std::size_t k = 0; k < o.cells.size(); ++k) {
      const auto& c = o.cells[k];
      const double f = c.row == c.col ? 1.0 : 2.0;
      s += o.weights[k] * x(static_cast<Eigen::Index>(c.row), static_cast<Eigen::Index>(c.col));
      if (live(c)) denom += o.weights[k] * o.weights[k] / f;
    }
    const double r = o.target.get_d() - s;
    if (r == 0 || denom == 0) continue;
    for (std::size_t k = 0; k < o.cells.size(); ++k) {
      const auto& c = o.cells[k];
      if (!live(c)) continue;
      const double f = c.row == c.col ? 1.0 : 2.0;
      const auto i = static_cast<Eigen::Index>(c.row), j = static_cast<Eigen::Index>(c.col);
      x(i, j) += r * (o.weights[k] / f) / denom;
      if (i != j) x(j, i) = x(i, j);
    }
  }
  return x;
}

/// Count of eigenvalues above rel_tol * lambda_max.
inline std::size_t numerical_rank(const Eigen::MatrixXd& x, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (top <= 0) return 0;
  return static_cast<std::size_t>((ev.array() > rel_tol * top).count());
}

namespace detail {

struct Spectrum {
  Eigen::MatrixXd vectors;  // columns, largest eigenvalue first
  Eigen::VectorXd values;
};

inline Spectrum leading_spectrum(const Eigen::MatrixXd& x, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (x + x.transpose()));
  const auto& ev = es.eigenvalues();
  const Eigen::Index m = ev.size();
  const double top = ev(m - 1);
  Spectrum s;
  if (top <= 0) return s;
  Eigen::Index r = 0;
  while (r < m && ev(m - 1 - r) > rel_tol * top) ++r;
  s.vectors.resize(x.rows(), r);
  s.values.resize(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    s.vectors.col(k) = es.eigenvectors().col(m - 1 - k);
    s.values(k) = ev(m - 1 - k);
  }
  return s;
}

// Sum of the eigenvalues beyond the first `keep` (largest first).
inline double spectral_tail(const Eigen::MatrixXd& x, std::size_t keep) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double s = 0;
  const auto m = static_cast<std::size_t>(ev.size());
  for (std::size_t k = keep; k < m; ++k) s += std::max(0.0, ev(static_cast<Eigen::Index>(m - 1 - k)));
  return s;
}

}  // namespace detail

/// Moves a feasible PSD Gram matrix to the PSD boundary along directions
/// that stay in the Gram space and in the current face, each step dropping
/// the numerical rank by at least one. Stops when no such direction exists.
inline Eigen::MatrixXd reduce_rank_on_boundary(const Eigen::MatrixXd& x0, const GramSpace& g,
                                               double rank_tol = 1e-7) {
  Eigen::MatrixXd x = 0.5 * (x0 + x0.transpose());
  const auto& orbits = g.orbits();
  const auto ncons = static_cast<Eigen::Index>(orbits.size());
  while (true) {
    auto spec = detail::leading_spectrum(x, rank_tol);
    const Eigen::Index r = spec.values.size();
    if (r == 0) break;
    const Eigen::MatrixXd& u = spec.vectors;

    // Face directions U S Uᵀ with V*(U S Uᵀ)V = 0, S symmetric r x r.
    const Eigen::Index nvar = r * (r + 1) / 2;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(ncons, nvar);
    for (Eigen::Index i = 0; i < ncons; ++i) {
      const auto& o = orbits[static_cast<std::size_t>(i)];
      for (std::size_t c = 0; c < o.cells.size(); ++c) {
        const auto row = static_cast<Eigen::Index>(o.cells[c].row);
        const auto col = static_cast<Eigen::Index>(o.cells[c].col);
        const double w = o.weights[c];
        Eigen::Index idx = 0;
        for (Eigen::Index a = 0; a < r; ++a)
          for (Eigen::Index b = a; b < r; ++b, ++idx) {
            double v = u(row, a) * u(col, b);
            if (a != b) v += u(row, b) * u(col, a);
            k(i, idx) += w * v;
          }
      }
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    Eigen::Index nonnull = 0;
    while (nonnull < sv.size() && sv(nonnull) > 1e-10 * std::max(smax, 1.0)) ++nonnull;
    if (nonnull >= nvar) break;

    const Eigen::VectorXd v = svd.matrixV().col(nonnull);
    Eigen::MatrixXd s(r, r);
    Eigen::Index idx = 0;
    for (Eigen::Index a = 0; a < r; ++a)
      for (Eigen::Index b = a; b < r; ++b, ++idx) s(a, b) = s(b, a) = v(idx);

    // Orientation: the largest entry of U S Uᵀ (first in row-major order) is positive.
    const Eigen::MatrixXd dir = u * s * u.transpose();
    const double dmax = dir.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0, done = 0; i < dir.rows() && !done; ++i)
      for (Eigen::Index j = i; j < dir.cols(); ++j)
        if (std::abs(dir(i, j)) >= (1 - 1e-9) * dmax) {
          if (dir(i, j) < 0) s = -s;
          done = 1;
          break;
        }

    const Eigen::VectorXd inv_sqrt = spec.values.array().rsqrt();
    const Eigen::MatrixXd scaled = inv_sqrt.asDiagonal() * s * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(r - 1);
    double t;
    if (lo < 0)
      t = -1.0 / lo;
    else if (hi > 0)
      t = -1.0 / hi;
    else
      break;

    Eigen::MatrixXd lam = spec.values.asDiagonal();
    lam += t * s;
    Eigen::MatrixXd next = u * lam * u.transpose();
    next = 0.5 * (next + next.transpose()).eval();
    if (numerical_rank(next, rank_tol) >= static_cast<std::size_t>(r)) break;
    x = std::move(next);
  }
  return x;
}

/// Deterministic pattern search over kernel coefficients that pushes the
/// eigenvalues beyond the first `target_rank` towards zero while staying PSD.
inline Eigen::MatrixXd refine_on_grid(const Eigen::MatrixXd& x0, const GramSpace& g,
                                      std::size_t target_rank, int rounds, double psd_tol) {
  std::vector<Eigen::MatrixXd> dirs;
  for (const auto& a : g.kernel_basis()) {
    Eigen::MatrixXd d = a.to_eigen();
    dirs.push_back(d / d.norm());
  }
  Eigen::MatrixXd x = x0;
  if (dirs.empty()) return x;
  double best = detail::spectral_tail(x, target_rank);
  double step = std::max(1e-3, x.norm());
  for (int round = 0; round < rounds && best > 0; ++round) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& d : dirs)
        for (double sign : {1.0, -1.0}) {
          Eigen::MatrixXd cand = x + sign * step * d;
          if (min_eigenvalue(cand) < -psd_tol) continue;
          const double tail = detail::spectral_tail(cand, target_rank);
          if (tail < best * (1 - 1e-12)) {
            best = tail;
            x = std::move(cand);
            improved = true;
          }
        }
    }
    step /= 2;
  }
  return x;
}

/// Factors a PSD Gram matrix into squares: X ~ Fᵀ F on the eigenvalues above
/// rank_tol * lambda_max, then an orthogonal change of rows puts F in echelon
/// form from the highest basis word down, so each square has a distinct
/// leading word where possible. Squares are returned with nonnegative
/// leading coefficient, sorted by leading word.
inline std::vector<RealPoly> extract_squares(const Eigen::MatrixXd& x, const MonomialBasis& basis,
                                             double rank_tol = 1e-7) {
  auto spec = detail::leading_spectrum(x, rank_tol);
  const Eigen::Index r = spec.values.size();
  const Eigen::Index m = x.rows();
  std::vector<RealPoly> squares;
  if (r == 0) return squares;
  Eigen::MatrixXd f = spec.values.array().sqrt().matrix().asDiagonal() * spec.vectors.transpose();
  Eigen::MatrixXd reversed = f.rowwise().reverse();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(reversed);
  Eigen::MatrixXd echelon = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const double scale = echelon.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < r; ++i) {
    RealPoly sq(basis.alphabet());
    for (Eigen::Index j = 0; j < m; ++j) {
      const double c = echelon(i, m - 1 - j);
      if (std::abs(c) > 1e-13 * scale) sq.add_term(basis[static_cast<std::size_t>(j)], c);
    }
    if (sq.is_zero()) continue;
    if (sq.terms().rbegin()->second < 0) sq *= -1.0;
    squares.push_back(std::move(sq));
  }
  std::stable_sort(squares.begin(), squares.end(), [](const RealPoly& a, const RealPoly& b) {
    return *a.leading_word() < *b.leading_word();
  });
  return squares;
}

namespace detail {

// Gauss-Newton on the Gram constraints as functions of a factor F (X = Fᵀ F),
// touching only columns in the support. Returns the final max residual.
inline double fit_gram_factor(const GramSpace& g, Eigen::MatrixXd& f, const GramSupport* sup,
                              int max_iter) {
  const Eigen::Index r = f.rows();
  const Eigen::Index m = f.cols();
  std::vector<Eigen::Index> cols;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(m), -1);
  for (Eigen::Index j = 0; j < m; ++j)
    if (!sup || sup->active[static_cast<std::size_t>(j)]) {
      slot[static_cast<std::size_t>(j)] = static_cast<Eigen::Index>(cols.size());
      cols.push_back(j);
    }
  const auto nc = static_cast<Eigen::Index>(cols.size());

  std::vector<const WordOrbit*> live;
  for (const auto& o : g.orbits())
    for (const auto& c : o.cells)
      if (slot[c.row] >= 0 && slot[c.col] >= 0) {
        live.push_back(&o);
        break;
      }
  const auto nr = static_cast<Eigen::Index>(live.size());

  auto residual = [&](const Eigen::MatrixXd& fm) {
    Eigen::VectorXd res(nr);
    for (Eigen::Index i = 0; i < nr; ++i) {
      const auto& o = *live[static_cast<std::size_t>(i)];
      double s = -o.target.get_d();
      for (std::size_t k = 0; k < o.cells.size(); ++k)
        s += o.weights[k] * fm.col(static_cast<Eigen::Index>(o.cells[k].row))
                                .dot(fm.col(static_cast<Eigen::Index>(o.cells[k].col)));
      res(i) = s;
    }
    return res;
  };

  Eigen::VectorXd res = residual(f);
  if (nr == 0 || r == 0) return nr == 0 ? 0.0 : res.cwiseAbs().maxCoeff();
  for (int it = 0; it < max_iter && res.cwiseAbs().maxCoeff() > 1e-15; ++it) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nr, r * nc);
    for (Eigen::Index i = 0; i < nr; ++i) {
      const auto& o = *live[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < o.cells.size(); ++k) {
        const auto a = static_cast<Eigen::Index>(o.cells[k].row);
        const auto b = static_cast<Eigen::Index>(o.cells[k].col);
        const Eigen::Index sa = slot[static_cast<std::size_t>(a)], sb = slot[static_cast<std::size_t>(b)];
        if (sa < 0 || sb < 0) continue;
        const double w = o.weights[k];
        for (Eigen::Index q = 0; q < r; ++q) {
          jac(i, q * nc + sa) += w * f(q, b);
          jac(i, q * nc + sb) += w * f(q, a);
        }
      }
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    const Eigen::VectorXd step = cod.solve(-res);
    double t = 1;
    bool moved = false;
    for (int ls = 0; ls < 12; ++ls, t /= 2) {
      Eigen::MatrixXd cand = f;
      for (Eigen::Index q = 0; q < r; ++q)
        for (Eigen::Index jj = 0; jj < nc; ++jj)
          cand(q, cols[static_cast<std::size_t>(jj)]) += t * step(q * nc + jj);
      Eigen::VectorXd cres = residual(cand);
      if (cres.norm() < res.norm()) {
        f = std::move(cand);
        res = std::move(cres);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return res.cwiseAbs().maxCoeff();
}

inline Eigen::MatrixXd gram_factor(const Eigen::MatrixXd& x, double rank_tol) {
  auto spec = leading_spectrum(x, rank_tol);
  return spec.values.array().sqrt().matrix().asDiagonal() * spec.vectors.transpose();
}

}  // namespace detail

/// Gauss-Newton refinement of a low-rank factor: with X ~ Fᵀ F (rank fixed by
/// rank_tol), drives the Gram constraints on Fᵀ F to machine precision.
/// Returns the input unchanged when the refinement does not reduce the
/// residual.
inline Eigen::MatrixXd polish_gram_factor(const GramSpace& g, const Eigen::MatrixXd& x,
                                          double rank_tol, const GramSupport* sup = nullptr,
                                          int max_iter = 30) {
  Eigen::MatrixXd f = detail::gram_factor(x, rank_tol);
  if (f.rows() == 0) return x;
  // Compared against the clipped factor, not x: x may carry tiny negative
  // eigenvalues that the factorization discards.
  const double start = detail::fit_gram_factor(g, f, sup, 0);
  const double end = detail::fit_gram_factor(g, f, sup, max_iter);
  if (end >= start) return x;
  return f.transpose() * f;
}

/// Tries to drop the rank one step at a time: truncates the factor to r - 1
/// rows and solves the Gram constraints on it. Stops at `floor` or at the
/// first rank that cannot be fitted to `fit_tol`.
inline Eigen::MatrixXd truncate_rank_by_fitting(const GramSpace& g, const Eigen::MatrixXd& x,
                                                std::size_t floor, double rank_tol,
                                                const GramSupport* sup = nullptr,
                                                double fit_tol = 1e-12, int max_iter = 60,
                                                int restarts = 6) {
  Eigen::MatrixXd best = x;
  Eigen::MatrixXd f = detail::gram_factor(x, rank_tol);
  while (static_cast<std::size_t>(f.rows()) > floor && f.rows() > 1) {
    // Starting points: drop each row of the factor (weakest first, since
    // leading_spectrum sorts descending), then rows of seeded random rotations.
    const Eigen::Index r = f.rows();
    std::mt19937_64 rng(static_cast<std::uint64_t>(r));
    std::normal_distribution<double> gauss;
    bool fitted = false;
    for (Eigen::Index attempt = 0; attempt < r + restarts && !fitted; ++attempt) {
      Eigen::MatrixXd start = f;
      Eigen::Index drop = r - 1 - attempt;
      if (attempt >= r) {
        Eigen::MatrixXd z(r, r);
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = gauss(rng);
        start = Eigen::HouseholderQR<Eigen::MatrixXd>(z).householderQ() * f;
        drop = r - 1;
      }
      Eigen::MatrixXd cand(r - 1, f.cols());
      for (Eigen::Index i = 0, k = 0; i < r; ++i)
        if (i != drop) cand.row(k++) = start.row(i);
      if (detail::fit_gram_factor(g, cand, sup, max_iter) <= fit_tol) {
        f = std::move(cand);
        fitted = true;
      }
    }
    if (!fitted) break;
    best = f.transpose() * f;
  }
  return best;
}

/// sum_i f_i* f_i.
inline RealPoly sum_of_squares(const std::vector<RealPoly>& squares, Alphabet a) {
  RealPoly out(a);
  for (const auto& f : squares) out += adjoint(f) * f;
  return out;
}

/// Largest coefficient of sum_i f_i* f_i - p.
inline double reconstruction_error(const NcPoly& p, const std::vector<RealPoly>& squares) {
  return max_abs_coeff(sum_of_squares(squares, p.alphabet()) - to_real(p));
}

struct VerificationReport {
  double coefficient_error = 0;
  // Worst lambda_min of p(M) over the sampled tuples.
  double worst_min_eigenvalue = 0;
};

/// Re-expands the squares against p and samples p on random matrix tuples of
/// sizes 1..3 as a side check of matrix positivity.
inline VerificationReport verify_decomposition(const NcPoly& p, const SosDecomposition& d,
                                               int samples = 20, std::uint64_t seed = 1) {
  VerificationReport rep;
  rep.coefficient_error = reconstruction_error(p, d.squares);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  rep.worst_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index k = 1 + s % 3;
    std::vector<Eigen::MatrixXd> mats;
    for (int j = 0; j < p.alphabet().n; ++j) {
      Eigen::MatrixXd m(k, k);
      for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = gauss(rng);
      mats.push_back(std::move(m));
    }
    const Eigen::MatrixXd v = evaluate(p, MatrixTuple(std::move(mats)));
    rep.worst_min_eigenvalue =
        std::min(rep.worst_min_eigenvalue, min_eigenvalue(0.5 * (v + v.transpose())));
  }
  return rep;
}

/// Decomposes a symmetric p as a sum of squares, or reports that the trace
/// SDP over the PSD Gram slice is infeasible (p is then numerically not SOS).
inline SosOutcome sos_decompose(const NcPoly& p, const SosOptions& opt = {}) {
  const GramSpace g = build_gram_space(p);
  SosOutcome out;
  const std::size_t lower = rank_lower_bound(g);
  out.certificate = RankCertificate::make(lower, std::nullopt);

  if (p.is_zero()) {
    SosDecomposition d;
    d.gram = Eigen::MatrixXd::Zero(1, 1);
    d.certificate = RankCertificate::make(0, 0);
    out.certificate = d.certificate;
    out.decomposition = std::move(d);
    out.status = SosStatus::Decomposed;
    return out;
  }

  const GramSupport sup = prune_gram_support(g);
  if (sup.infeasible) {
    out.status = SosStatus::Infeasible;
    return out;
  }
  // A stalled solve is retried from differently scaled starting points; the
  // least-infeasible iterate is kept and the final reconstruction check decides.
  const SdpProblem trace = trace_problem(g, &sup);
  for (double scale : {1.0, 10.0, 0.1, 100.0}) {
    SdpOptions so = opt.sdp;
    so.initial_scale *= scale;
    SdpSolution sol = solve(trace, so);
    const bool first = scale == 1.0;
    if (sol.status == SdpStatus::Infeasible) {
      if (first) {
        out.sdp = std::move(sol);
        out.status = SosStatus::Infeasible;
        return out;
      }
      continue;
    }
    if (first || sol.primal_residual < out.sdp.primal_residual) out.sdp = std::move(sol);
    if (out.sdp.status == SdpStatus::Optimal) break;
  }
  if (out.sdp.status != SdpStatus::Optimal && out.sdp.primal_residual > 1e-3) {
    out.status = SosStatus::SolverFailure;
    return out;
  }

  Eigen::MatrixXd x = project_to_gram_space(g, embed_support(out.sdp.x, sup), &sup);
  x = reduce_rank_on_boundary(x, g, opt.rank_tol);
  std::size_t best_rank = numerical_rank(x, opt.rank_tol);

  // Reweighted trace: minimize <(X_k + delta I)^-1, X> from the current point.
  Eigen::MatrixXd current = x;
  for (int round = 0; round < opt.reweight_rounds && best_rank > lower; ++round) {
    Eigen::MatrixXd reduced = restrict_support(current, sup);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
    const double top = std::max(es.eigenvalues().maxCoeff(), 1e-300);
    const Eigen::VectorXd inv =
        (es.eigenvalues().array().max(0.0) + opt.reweight_delta * top).inverse();
    Eigen::MatrixXd weight = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    weight = 0.5 * (weight + weight.transpose()).eval();
    SdpProblem prob = trace_problem(g, &sup);
    prob.objective = weight / weight.diagonal().maxCoeff();
    const SdpSolution sol = solve(prob, opt.sdp);
    if (sol.status == SdpStatus::Infeasible ||
        (sol.status != SdpStatus::Optimal && sol.primal_residual > 1e3 * opt.sdp.feas_tol))
      break;
    current = project_to_gram_space(g, embed_support(sol.x, sup), &sup);
    current = reduce_rank_on_boundary(current, g, opt.rank_tol);
    const std::size_t rk = numerical_rank(current, opt.rank_tol);
    if (rk < best_rank) {
      best_rank = rk;
      x = current;
    }
  }

  if (best_rank > lower && g.kernel_dimension() <= opt.refine_max_kernel &&
      g.kernel_dimension() > 0) {
    x = refine_on_grid(x, g, lower, opt.refine_rounds, opt.sdp.psd_tol);
    x = reduce_rank_on_boundary(x, g, opt.rank_tol);
  }
  if (numerical_rank(x, opt.rank_tol) > lower)
    x = truncate_rank_by_fitting(g, x, lower, opt.rank_tol, &sup);
  x = polish_gram_factor(g, x, opt.rank_tol, &sup);

  SosDecomposition d;
  d.squares = extract_squares(x, g.basis(), opt.rank_tol);
  d.gram = x;
  d.reconstruction_error = reconstruction_error(p, d.squares);
  d.certificate = RankCertificate::make(lower, d.squares.size());
  out.certificate = d.certificate;
  out.status = d.reconstruction_error <= opt.accept_error ? SosStatus::Decomposed
                                                          : SosStatus::SolverFailure;
  out.decomposition = std::move(d);
  return out;
}

}  // namespace ncsos
