#include <gtest/gtest.h>

#include "gen.hpp"
#include "kpa/expr/errors.hpp"
#include "kpa/expr/eval.hpp"
#include "kpa/expr/parser.hpp"
#include "kpa/expr/series.hpp"

namespace {

using namespace kpa::expr;

Normal P(const char* text) { return to_normal(parse(text)); }

TEST(Series, ExponentialCoefficients) {
  const SeriesPoly s = series(P("exp(x1)"), "x1", Rational(0), 4);
  ASSERT_EQ(s.coefficients.size(), 5u);
  EXPECT_EQ(s.coefficient(0), Normal(1));
  EXPECT_EQ(s.coefficient(1), Normal(1));
  EXPECT_EQ(s.coefficient(2), Normal(Rational(1, 2)));
  EXPECT_EQ(s.coefficient(3), Normal(Rational(1, 6)));
  EXPECT_EQ(s.coefficient(4), Normal(Rational(1, 24)));
}

TEST(Series, AtInfinityUsesInverseVariable) {
  // kappa*(exp(p0/kappa) - 1) = p0 + p0^2/(2 kappa) + ...
  const SeriesPoly s = series(P("kappa*(exp(p0/kappa) - 1)"), "kappa", std::nullopt, 2);
  EXPECT_EQ(s.coefficient(0), P("p0"));
  EXPECT_EQ(s.coefficient(1), P("p0^2/2"));
  EXPECT_EQ(s.coefficient(2), P("p0^3/6"));
}

TEST(Series, SqrtAndLogarithm) {
  const SeriesPoly r = series(P("sqrt(1+x1)"), "x1", Rational(0), 2);
  EXPECT_EQ(r.coefficient(1), Normal(Rational(1, 2)));
  EXPECT_EQ(r.coefficient(2), Normal(Rational(-1, 8)));
  const SeriesPoly l = series(P("ln(1+x1)"), "x1", Rational(0), 3);
  EXPECT_EQ(l.coefficient(0), Normal(0));
  EXPECT_EQ(l.coefficient(3), Normal(Rational(1, 3)));
}

TEST(Series, PolesAreRejected) {
  EXPECT_THROW(series(P("1/x1"), "x1", Rational(0), 2), kpa::PoleError);
  EXPECT_THROW(series(P("sqrt(x1)"), "x1", Rational(0), 2), kpa::PoleError);
}

// Property: the truncated series of a product is the truncated product of the series.
TEST(Series, ProductOfTruncations) {
  kpatest::Gen g(11);
  const std::vector<std::string> pool{"x1", "p1"};
  for (int i = 0; i < 20; ++i) {
    Normal a = g.poly(pool) + kpa::expr::exp(Normal::symbol("x1") * g.rational());
    Normal b = g.positive(pool);
    const int order = 3;
    const SeriesPoly sa = series(a, "x1", Rational(0), order);
    const SeriesPoly sb = series(b, "x1", Rational(0), order);
    const SeriesPoly sab = series(a * b, "x1", Rational(0), order);
    for (int k = 0; k <= order; ++k) {
      Normal c;
      for (int j = 0; j <= k; ++j) c += sa.coefficient(j) * sb.coefficient(k - j);
      EXPECT_EQ(sab.coefficient(k), c) << "k=" << k << " a=" << a.str() << " b=" << b.str();
    }
  }
}

TEST(Laurent, InverseAndPowers) {
  const Normal one(1);
  const Laurent x = Laurent::monomial(one, 1);
  const Laurent u = Laurent::constant(one) + x;
  const Laurent inv = u.inverse().truncate(5);
  const Laurent prod = (u * inv).truncate(5);
  EXPECT_EQ(prod.coefficient(0), one);
  for (int k = 1; k < 5; ++k) EXPECT_TRUE(prod.coefficient(k).is_zero()) << k;
  EXPECT_EQ(inv.coefficient(3), Normal(-1));
  EXPECT_EQ(x.pow(-2).valuation(), -2);
  EXPECT_EQ(u.pow(2).coefficient(1), Normal(2));
}

}  // namespace
