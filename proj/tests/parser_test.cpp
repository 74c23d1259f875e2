#include <gtest/gtest.h>

#include <random>

#include "ncsos/parser.hpp"
#include "support.hpp"

namespace ncsos {
namespace {

NcPoly var(int n, int j, bool star = false) { return NcPoly::variable(Alphabet(n), j, star); }
NcPoly num(int n, long a, long b = 1) { return NcPoly::constant(Alphabet(n), make_rational(a, b)); }

TEST(Parse, PaperPolynomial) {
  const NcPoly p = parse_poly("1 + x1'*x1 + x1*x1'");
  EXPECT_EQ(p, num(1, 1) + var(1, 1, true) * var(1, 1) + var(1, 1) * var(1, 1, true));
}

TEST(Parse, Zero) {
  EXPECT_TRUE(parse_poly("0").is_zero());
  EXPECT_TRUE(parse_poly("x1 - x1").is_zero());
}

TEST(Parse, AdjointOfSum) {
  EXPECT_EQ(parse_poly("(x1 + x2')'"), var(2, 1, true) + var(2, 2));
}

TEST(Parse, AdjointReversesProducts) {
  EXPECT_EQ(parse_poly("(x1*x2)'"), var(2, 2, true) * var(2, 1, true));
  EXPECT_EQ(parse_poly("x1''"), var(1, 1));
}

TEST(Parse, Precedence) {
  // ' binds tighter than ^, which binds tighter than *
  EXPECT_EQ(parse_poly("x1'^2"), var(1, 1, true) * var(1, 1, true));
  EXPECT_EQ(parse_poly("x1*x2^2"), var(2, 1) * var(2, 2) * var(2, 2));
  EXPECT_EQ(parse_poly("-x1^2"), -(var(1, 1) * var(1, 1)));
  EXPECT_EQ(parse_poly("2*x1 - 3*x1 + 1"), num(1, 1) - var(1, 1));
  EXPECT_EQ(parse_poly("(1 + x1)^0"), num(1, 1));
  EXPECT_EQ(parse_poly("(x1 + 1)^2"), var(1, 1) * var(1, 1) + num(1, 2) * var(1, 1) + num(1, 1));
}

TEST(Parse, Coefficients) {
  EXPECT_EQ(parse_poly("3/4*x1"), num(1, 3, 4) * var(1, 1));
  EXPECT_EQ(parse_poly("0.125"), num(1, 1, 8));
  EXPECT_EQ(parse_poly("2/6"), num(1, 1, 3));
  EXPECT_EQ(parse_poly("- - 2"), num(1, 2));
}

TEST(Parse, WhitespaceAndNewlines) {
  EXPECT_EQ(parse_poly(" x1 \n *\t x1' "), var(1, 1) * var(1, 1, true));
}

TEST(Parse, AlphabetInferredOrDeclared) {
  EXPECT_EQ(parse_poly("x3").alphabet().n, 3);
  EXPECT_EQ(parse_poly("1").alphabet().n, 1);
  EXPECT_EQ(parse_poly("x1", 4).alphabet().n, 4);
}

TEST(ParseErrors, ReportLineAndColumn) {
  try {
    parse_poly("x1 +\n  x2 ?");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 6u);
  }
  try {
    parse_poly("x1 * (x2 + 1");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 13u);
  }
}

TEST(ParseErrors, Rejections) {
  EXPECT_THROW(parse_poly("x3", 2), ParseError);
  EXPECT_THROW(parse_poly("x0"), ParseError);
  EXPECT_THROW(parse_poly("x1 +"), ParseError);
  EXPECT_THROW(parse_poly(""), ParseError);
  EXPECT_THROW(parse_poly("2x1"), ParseError);
  EXPECT_THROW(parse_poly("x1^x1"), ParseError);
  EXPECT_THROW(parse_poly("x1^1.5"), ParseError);
  EXPECT_THROW(parse_poly("1/0"), ParseError);
  EXPECT_THROW(parse_poly("x"), ParseError);
  EXPECT_THROW(parse_poly("x1)"), ParseError);
}

TEST(Format, Examples) {
  EXPECT_EQ(format_poly(parse_poly("x1*x1' + x1'*x1 + 1")), "1 + x1*x1' + x1'*x1");
  EXPECT_EQ(format_poly(parse_poly("-1/2*x2 + x1'")), "-1/2*x2 + x1'");
  EXPECT_EQ(format_poly(parse_poly("0")), "0");
  EXPECT_EQ(format_poly(parse_poly("-3")), "-3");
}

TEST(Format, RoundTripRandom) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const Alphabet a(1 + static_cast<int>(rng() % 3));
    const NcPoly p = testing::random_poly(a, 3, 6, rng);
    const std::string text = format_poly(p);
    ASSERT_EQ(parse_poly(text, a.n), p) << text;
    ASSERT_EQ(format_poly(parse_poly(text, a.n)), text);
  }
}

}  // namespace
}  // namespace ncsos
