#include <gtest/gtest.h>

#include <random>

#include "ncsos/ncpoly.hpp"
#include "support.hpp"

namespace ncsos {
namespace {

using testing::max_abs;

const Alphabet kOne(1);
NcPoly x(int j = 1, Alphabet a = kOne) { return NcPoly::variable(a, j); }
NcPoly xs(int j = 1, Alphabet a = kOne) { return NcPoly::variable(a, j, true); }
NcPoly one(Alphabet a = kOne) { return NcPoly::constant(a, Rational(1)); }

// The polynomial 1 + X*X + XX* in one variable.
NcPoly paper_p() { return one() + xs() * x() + x() * xs(); }

TEST(PolyMul, ConcatenatesWords) {
  EXPECT_EQ(x() * xs(), NcPoly::monomial(kOne, Word{1, 2}));
}

TEST(PolyMul, ZeroAnnihilates) {
  EXPECT_TRUE((paper_p() * NcPoly(kOne)).is_zero());
}

TEST(PolyMul, DifferenceOfSquares) {
  EXPECT_EQ((one() + x()) * (one() - x()), one() - x() * x());
}

TEST(PolyMul, MixedAlphabetsRejected) {
  EXPECT_THROW(x(1, Alphabet(1)) * x(1, Alphabet(2)), std::invalid_argument);
}

TEST(PolyAdjoint, SymmetricMonomialFixed) {
  EXPECT_EQ(adjoint(x() * xs()), x() * xs());
}

TEST(PolyAdjoint, ScalesCarryOver) {
  EXPECT_EQ(adjoint(Rational(2) * x()), Rational(2) * xs());
}

TEST(PolyAdjoint, AdditiveAgainstTermwiseOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Alphabet a(1 + static_cast<int>(rng() % 2));
    const NcPoly p = testing::random_poly(a, 3, 6, rng);
    const NcPoly q = testing::random_poly(a, 3, 6, rng);
    // Independent computation: reverse and toggle each word by hand.
    NcPoly expected(a);
    for (const auto* src : {&p, &q})
      for (const auto& [w, c] : src->terms()) {
        std::vector<Letter> l(w.letters().rbegin(), w.letters().rend());
        for (auto& v : l) v = v <= a.n ? v + a.n : v - a.n;
        expected.add_term(Word(l), c);
      }
    EXPECT_EQ(adjoint(p + q), expected);
    EXPECT_EQ(adjoint(p + q), adjoint(p) + adjoint(q));
  }
}

TEST(PolyInvariants, InvolutionAndReversedProduct) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Alphabet a(1 + static_cast<int>(rng() % 2));
    const NcPoly p = testing::random_poly(a, 3, 6, rng);
    const NcPoly q = testing::random_poly(a, 3, 6, rng);
    ASSERT_EQ(adjoint(adjoint(p)), p);
    ASSERT_EQ(adjoint(p * q), adjoint(q) * adjoint(p));
  }
}

TEST(PolyInvariants, ZeroHasSentinelDegreeAndNoTerms) {
  NcPoly z(kOne);
  EXPECT_EQ(z.degree(), NcPoly::kZeroDegree);
  EXPECT_EQ(z.size(), 0u);
  z.add_term(Word{1}, Rational(3));
  z.add_term(Word{1}, Rational(-3));
  EXPECT_TRUE(z.is_zero());
  EXPECT_FALSE(z.leading_word().has_value());
}

TEST(PolyInvariants, SymmetryIsExact) {
  EXPECT_TRUE(is_symmetric(paper_p()));
  EXPECT_FALSE(is_symmetric(x()));
  EXPECT_TRUE(is_symmetric(x() + xs()));
  EXPECT_FALSE(is_symmetric(x() + make_rational(1, 3) * xs()));
}

TEST(Evaluate, StarIsTranspose) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 0, 0;
  Eigen::MatrixXd expected(2, 2);
  expected << 0, 0, 0, 1;
  EXPECT_EQ(evaluate(xs() * x(), MatrixTuple({m})), expected);
}

TEST(Evaluate, ConstantIsIdentity) {
  std::mt19937_64 rng(3);
  const auto t = testing::random_tuple(1, 4, rng);
  EXPECT_EQ(evaluate(one(), t), Eigen::MatrixXd::Identity(4, 4));
}

TEST(Evaluate, PaperPolynomialDominatesIdentity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd v = evaluate(paper_p(), testing::random_tuple(1, 3, rng));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
    EXPECT_GE(es.eigenvalues().minCoeff(), 1 - 1e-9);
  }
}

TEST(Evaluate, StarHomomorphism) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 2);
    const Alphabet a(n);
    const NcPoly p = testing::random_poly(a, 3, 6, rng);
    const NcPoly q = testing::random_poly(a, 3, 6, rng);
    const auto t = testing::random_tuple(n, 1 + static_cast<Eigen::Index>(rng() % 4), rng);
    EXPECT_LE(max_abs(evaluate(p * q, t) - evaluate(p, t) * evaluate(q, t)), 1e-10);
    EXPECT_LE(max_abs(evaluate(adjoint(p), t) - evaluate(p, t).transpose()), 1e-10);
  }
}

TEST(Evaluate, SymmetricPolynomialGivesSymmetricMatrix) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 2);
    const NcPoly p = testing::random_symmetric(Alphabet(n), 3, 6, rng);
    const Eigen::MatrixXd v = evaluate(p, testing::random_tuple(n, 3, rng));
    EXPECT_LE(max_abs(v - v.transpose()), 1e-12);
  }
}

TEST(Evaluate, TupleValidation) {
  EXPECT_THROW(MatrixTuple({}), std::invalid_argument);
  EXPECT_THROW(MatrixTuple({Eigen::MatrixXd(2, 3)}), std::invalid_argument);
  EXPECT_THROW(MatrixTuple({Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)}),
               std::invalid_argument);
  EXPECT_THROW(evaluate(x(1, Alphabet(2)), MatrixTuple({Eigen::MatrixXd::Zero(2, 2)})),
               std::invalid_argument);
}

TEST(Commutes, XDoesNotCommuteWithItsAdjoint) { EXPECT_FALSE(commutes(x(), xs())); }

TEST(Commutes, PowersOfSCommute) {
  const NcPoly s = xs() * x() + x() * xs();
  EXPECT_TRUE(commutes(s, s * s));
}

TEST(Commutes, XStarXAgainstS) {
  const NcPoly s = xs() * x() + x() * xs();
  const NcPoly qq = xs() * x();
  EXPECT_FALSE(commutes(qq, s));
  // [X*X, S] = X*X XX* - XX* X*X
  EXPECT_EQ(commutator(qq, s), qq * x() * xs() - x() * xs() * qq);
}

}  // namespace
}  // namespace ncsos
