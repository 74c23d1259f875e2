#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ncsos/sdp.hpp"
#include "ncsos/sos.hpp"
#include "support.hpp"

namespace ncsos {
namespace {

using testing::max_abs;

SdpProblem identity_objective(Eigen::Index m) {
  SdpProblem p;
  p.dim = m;
  p.objective = Eigen::MatrixXd::Identity(m, m);
  return p;
}

SdpConstraint entry(Eigen::Index r, Eigen::Index c, double rhs) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(std::max(r, c) + 1, std::max(r, c) + 1);
  a(r, c) = a(c, r) = r == c ? 1.0 : 0.5;
  return SdpConstraint::from_dense(a, rhs);
}

void expect_contract(const SdpSolution& s, const SdpOptions& opt = {}) {
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_LE(s.primal_residual, opt.feas_tol);
  EXPECT_GE(s.min_eigenvalue, -opt.psd_tol);
  EXPECT_GE(s.objective, s.dual_objective - 1e-6);
}

// Random instance with a strictly feasible point and a generic objective, so
// the optimum is unique.
SdpProblem random_instance(Eigen::Index m, int cons, std::mt19937_64& rng) {
  SdpProblem p;
  p.dim = m;
  const Eigen::MatrixXd g = testing::random_matrix(m, rng);
  const Eigen::MatrixXd x0 = g * g.transpose() + Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd h = testing::random_matrix(m, rng);
  p.objective = h * h.transpose() + 0.1 * Eigen::MatrixXd::Identity(m, m);
  p.objective = 0.5 * (p.objective + p.objective.transpose()).eval();
  for (int i = 0; i < cons; ++i) {
    Eigen::MatrixXd a = testing::random_matrix(m, rng);
    a = (0.5 * (a + a.transpose())).eval();
    p.constraints.push_back(SdpConstraint::from_dense(a, (a.cwiseProduct(x0)).sum()));
  }
  return p;
}

TEST(SdpSolve, OneByOne) {
  SdpProblem p = identity_objective(1);
  p.constraints.push_back(entry(0, 0, 2));
  const SdpSolution s = solve(p);
  expect_contract(s);
  EXPECT_NEAR(s.x(0, 0), 2, 1e-8);
  EXPECT_NEAR(s.objective, 2, 1e-8);
}

TEST(SdpSolve, TwoByTwoCornerFixed) {
  SdpProblem p = identity_objective(2);
  p.constraints.push_back(entry(0, 0, 1));
  const SdpSolution s = solve(p);
  expect_contract(s);
  EXPECT_NEAR(s.objective, 1, 1e-6);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
  expected(0, 0) = 1;
  EXPECT_LE(max_abs(s.x - expected), 1e-6);
}

TEST(SdpSolve, PaperTraceProblemHasObjectiveThree) {
  const NcPoly one = NcPoly::constant(Alphabet(1), Rational(1));
  const NcPoly x = NcPoly::variable(Alphabet(1), 1), xs = NcPoly::variable(Alphabet(1), 1, true);
  const SdpSolution s = solve(trace_problem(build_gram_space(one + xs * x + x * xs)));
  expect_contract(s);
  EXPECT_NEAR(s.objective, 3, 1e-8);
}

TEST(SdpSolve, NoConstraintsGivesZero) {
  const SdpSolution s = solve(identity_objective(3));
  expect_contract(s);
  EXPECT_NEAR(s.objective, 0, 1e-8);
}

TEST(SdpSolve, DetectsNegativeDiagonalDemand) {
  SdpProblem p = identity_objective(2);
  p.constraints.push_back(entry(0, 0, -1));
  EXPECT_EQ(solve(p).status, SdpStatus::Infeasible);
}

TEST(SdpSolve, DetectsOffDiagonalBeyondDiagonals) {
  SdpProblem p = identity_objective(2);
  p.constraints.push_back(entry(0, 0, 1));
  p.constraints.push_back(entry(1, 1, 1));
  p.constraints.push_back(entry(0, 1, 2));
  EXPECT_EQ(solve(p).status, SdpStatus::Infeasible);
}

TEST(SdpSolve, RandomInstancesMeetContractAndWeakDuality) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 6);
    const SdpProblem p = random_instance(m, 1 + static_cast<int>(rng() % (m * (m + 1) / 2)), rng);
    const SdpSolution s = solve(p);
    expect_contract(s);
    EXPECT_NEAR(s.objective, (p.objective.cwiseProduct(s.x)).sum(), 1e-9 * (1 + std::abs(s.objective)));
  }
}

TEST(SdpSolve, ScaledConstraintsGiveSameSolution) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 8; ++trial) {
    const SdpProblem p = random_instance(4, 4, rng);
    const SdpSolution base = solve(p);
    expect_contract(base);
    for (double gamma : {0.01, 0.5, 7.0, 100.0}) {
      SdpProblem q = p;
      for (auto& c : q.constraints) {
        for (auto& t : c.entries) t = Eigen::Triplet<double>(t.row(), t.col(), gamma * t.value());
        c.rhs *= gamma;
      }
      const SdpSolution s = solve(q);
      expect_contract(s);
      EXPECT_NEAR(s.objective, base.objective, 1e-8 * (1 + std::abs(base.objective))) << gamma;
      // The optimal X is only determined to about sqrt(gap) on these faces.
      EXPECT_LE(max_abs(s.x - base.x), 1e-3) << gamma;
    }
  }
}

TEST(SdpSolve, Deterministic) {
  std::mt19937_64 rng(33);
  const SdpProblem p = random_instance(5, 6, rng);
  const SdpSolution a = solve(p), b = solve(p);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SdpProblem, ValidateRejectsAsymmetry) {
  SdpProblem p = identity_objective(2);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 1) = 1;
  p.constraints.push_back(SdpConstraint::from_dense(a, 1));
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW(solve(p), std::invalid_argument);
}

Eigen::MatrixXd paper_kernel() {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 1) = m(1, 0) = 1;
  m(0, 2) = m(2, 0) = -1;
  return m;
}

TEST(MaxStep, PaperKernelDirection) {
  const double t = max_step_to_boundary(Eigen::MatrixXd::Identity(3, 3), paper_kernel());
  EXPECT_NEAR(t, 1 / std::sqrt(2.0), 1e-10);
}

TEST(MaxStep, PsdDirectionIsUnbounded) {
  EXPECT_EQ(max_step_to_boundary(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)),
            std::numeric_limits<double>::infinity());
}

TEST(MaxStep, SingularStart) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 2), n = Eigen::MatrixXd::Zero(2, 2);
  x(0, 0) = 1;
  n(0, 0) = -1;
  EXPECT_NEAR(max_step_to_boundary(x, n), 1, 1e-12);
}

TEST(MaxStep, LandsOnTheBoundary) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 5);
    const Eigen::MatrixXd g = testing::random_matrix(m, rng);
    const Eigen::MatrixXd x = g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd n = testing::random_matrix(m, rng);
    n = (n + n.transpose()).eval();
    const double t = max_step_to_boundary(x, n);
    if (!std::isfinite(t)) continue;
    const double lo = min_eigenvalue(x + t * n);
    EXPECT_GE(lo, -1e-8);
    EXPECT_LE(lo, 1e-8);
  }
}

}  // namespace
}  // namespace ncsos
