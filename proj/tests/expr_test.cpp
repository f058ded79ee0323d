#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "kpa/expr/equality.hpp"
#include "kpa/expr/errors.hpp"
#include "kpa/expr/eval.hpp"
#include "kpa/expr/expr.hpp"
#include "kpa/expr/parser.hpp"

namespace {

using namespace kpa::expr;
using kpatest::Gen;
using kpatest::small_pool;

constexpr int kCases = 60;

Normal P(const char* text) { return to_normal(parse(text)); }
Normal S(const char* name) { return Normal::symbol(name); }

PhasePoint point(std::uint64_t seed) {
  auto rng = tagged_rng(seed, "expr-test");
  return sample_point(rng, false);
}

TEST(NormalRing, CommutativeAndAssociative) {
  Gen g(1);
  for (int i = 0; i < kCases; ++i) {
    Normal a = g.rational_function(small_pool());
    Normal b = g.rational_function(small_pool());
    Normal c = g.rational_function(small_pool());
    SCOPED_TRACE(a.str() + " | " + b.str() + " | " + c.str());
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
  }
}

TEST(NormalRing, DistributiveWithInverses) {
  Gen g(2);
  for (int i = 0; i < kCases; ++i) {
    Normal a = g.rational_function(small_pool(), true);
    Normal b = g.rational_function(small_pool(), true);
    Normal c = g.positive(small_pool());
    SCOPED_TRACE(a.str() + " | " + b.str() + " | " + c.str());
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_EQ((a / c) * c, a);
    EXPECT_EQ(c * c.inverse(), Normal(1));
    EXPECT_EQ(c.pow(3), c * c * c);
    EXPECT_EQ(c.pow(-2), Normal(1) / (c * c));
  }
}

TEST(NormalRing, EqualValuesHaveEqualForms) {
  EXPECT_EQ(P("(x1+1)/(x1^2-1)"), P("1/(x1-1)"));
  EXPECT_EQ(P("2/(4*x1)"), P("1/(2*x1)"));
  EXPECT_EQ(P("(p0+p1)^2 - p0^2 - 2*p0*p1"), P("p1^2"));
  EXPECT_EQ(P("psq"), P("p1^2+p2^2+p3^2"));
}

TEST(NormalRing, DivisionByZeroThrows) {
  EXPECT_THROW(S("x1") / Normal(0), kpa::DivisionByZero);
  EXPECT_THROW(P("1/(x1-x1)"), kpa::DivisionByZero);
}

TEST(NormalPrint, RoundTripsThroughParser) {
  Gen g(3);
  for (int i = 0; i < kCases; ++i) {
    Normal a = g.rational_function(small_pool(), true);
    SCOPED_TRACE(a.str());
    EXPECT_EQ(to_normal(parse(a.str())), a);
    EXPECT_EQ(to_normal(from_normal(a)), a);
  }
}

TEST(NormalPrint, NormalizeIsIdempotent) {
  Gen g(4);
  for (int i = 0; i < 20; ++i) {
    Expr e = parse(g.rational_function(small_pool(), true).str());
    EXPECT_EQ(normalize(normalize(e)), normalize(e));
  }
}

TEST(NormalEval, AgreesWithTreeEvaluation) {
  Gen g(5);
  for (int i = 0; i < kCases; ++i) {
    Normal a = g.rational_function(small_pool(), true);
    Expr tree = parse(a.str());
    PhasePoint pt = point(static_cast<std::uint64_t>(i));
    SCOPED_TRACE(a.str());
    EXPECT_TRUE(close(eval(a, pt), eval(tree, pt), 1e-12L));
  }
}

TEST(Atoms, SimplificationRules) {
  EXPECT_EQ(P("ln(exp(x1))"), S("x1"));
  EXPECT_EQ(P("exp(0)"), Normal(1));
  EXPECT_EQ(P("ln(1)"), Normal(0));
  EXPECT_EQ(P("sqrt(4)"), Normal(2));
  EXPECT_EQ(P("sqrt(1+x1)*sqrt(1+x1)"), P("1+x1"));
  EXPECT_EQ(P("cosh(x1)^2 - sinh(x1)^2"), Normal(1));
  EXPECT_EQ(P("exp(-x1)*exp(x1)"), Normal(1));
}

TEST(Atoms, SqrtSquaresBackToRadicand) {
  Gen g(6);
  for (int i = 0; i < kCases; ++i) {
    Normal r = g.positive(small_pool());
    SCOPED_TRACE(r.str());
    EXPECT_EQ(sqrt(r) * sqrt(r), r);
    EXPECT_EQ(sqrt(r).inverse() * sqrt(r), Normal(1));
  }
}

TEST(Derivative, LinearityAndProductRule) {
  Gen g(7);
  const VarId x = symbol_id("x1");
  for (int i = 0; i < kCases; ++i) {
    Normal a = g.rational_function(small_pool(), true);
    Normal b = g.rational_function(small_pool(), true);
    SCOPED_TRACE(a.str() + " | " + b.str());
    EXPECT_EQ(diff(a + b, x), diff(a, x) + diff(b, x));
    EXPECT_EQ(diff(a * b, x), diff(a, x) * b + a * diff(b, x));
  }
}

TEST(Derivative, ElementaryFunctions) {
  EXPECT_EQ(diff(P("exp(x1/kappa)"), "x1"), P("exp(x1/kappa)/kappa"));
  EXPECT_EQ(diff(P("ln(1+x1^2)"), "x1"), P("2*x1/(1+x1^2)"));
  EXPECT_EQ(diff(P("sqrt(1+x1^2)"), "x1"), P("x1/sqrt(1+x1^2)"));
  EXPECT_EQ(diff(P("x0*p0"), "x1"), Normal(0));
}

// Independent oracle: central differences of the numeric evaluator.
TEST(Derivative, MatchesFiniteDifferences) {
  Gen g(8);
  for (int i = 0; i < 30; ++i) {
    Normal a = g.rational_function(small_pool(), true);
    Normal d = diff(a, "p1");
    PhasePoint pt = point(100 + static_cast<std::uint64_t>(i));
    const Real h = 1e-5L;
    PhasePoint up = pt;
    PhasePoint dn = pt;
    up.set("p1", pt.at("p1") + h);
    dn.set("p1", pt.at("p1") - h);
    up.refresh_sugar();
    dn.refresh_sugar();
    const Real fd = (eval(a, up) - eval(a, dn)) / (2 * h);
    SCOPED_TRACE(a.str());
    EXPECT_TRUE(close(eval(d, pt), fd, 1e-6L, 1e-8L)) << eval(d, pt) << " vs " << fd;
    const Dual dual = eval_dual(a, pt, {"p1"});
    EXPECT_TRUE(close(dual.d.at(0), eval(d, pt), 1e-10L));
  }
}

TEST(Substitution, IdentityAndComposition) {
  Gen g(9);
  for (int i = 0; i < kCases; ++i) {
    Normal a = g.rational_function(small_pool(), true);
    Normal b = g.poly({"x0", "p0", "kappa"});
    SCOPED_TRACE(a.str() + " | " + b.str());
    EXPECT_EQ(subst(a, std::map<std::string, Normal>{{"x1", S("x1")}}), a);
    // Simultaneous: bindings do not see each other's results.
    std::map<std::string, Normal> two{{"x0", S("p1") + 1}, {"p1", Normal(3)}};
    std::map<std::string, Normal> seq1{{"x0", S("p1") + 1}};
    std::map<std::string, Normal> seq2{{"p1", Normal(3)}};
    EXPECT_EQ(subst(a, two), subst(subst(a, seq2), seq1));
    // Substitution commutes with evaluation.
    PhasePoint pt = point(200 + static_cast<std::uint64_t>(i));
    PhasePoint moved = pt;
    moved.set("x1", eval(b, pt));
    moved.refresh_sugar();
    EXPECT_TRUE(close(eval(subst(a, std::map<std::string, Normal>{{"x1", b}}), pt), eval(a, moved), 1e-10L));
  }
}

TEST(Substitution, CyclicBindingsAreRejected) {
  std::map<std::string, Normal> swap{{"x0", S("p0")}, {"p0", S("x0")}};
  EXPECT_THROW(subst(S("x0"), swap), kpa::CyclicBinding);
  std::map<std::string, Normal> self{{"x0", S("x0") + 1}};
  EXPECT_THROW(subst(S("x0"), self), kpa::CyclicBinding);
}

TEST(Parser, ReportsPositionOfErrors) {
  try {
    parse("x1 +");
    FAIL() << "expected a parse error";
  } catch (const kpa::ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_GE(e.column(), 4);
  }
  EXPECT_THROW(parse("foo + x1"), kpa::UnknownIdentifier);
  EXPECT_THROW(parse("(x1"), kpa::ParseError);
  EXPECT_THROW(parse("x1 ^ x2"), kpa::ParseError);
}

TEST(Parser, SugarCanBeKept) {
  Expr kept = parse("psq", SymbolTable::standard(), ParseOptions{false});
  EXPECT_EQ(kept.str(), "psq");
  EXPECT_EQ(expand_sugar(to_normal(kept)), P("p1^2+p2^2+p3^2"));
}

TEST(Equality, ShellModeUsesPositiveEnergyBranch) {
  const Normal lhs = P("p0^2 - psq");
  const Normal rhs = P("m^2");
  EXPECT_FALSE(equal(lhs, rhs, EqualityMode::Exact).pass);
  const Verdict shell = equal(lhs, rhs, EqualityMode::Shell);
  EXPECT_TRUE(shell.pass);
  EXPECT_TRUE(shell.evidence.pass);
  EXPECT_EQ(shell_reduce(S("p0")), P("sqrt(m^2+psq)"));
}

TEST(Equality, FailureCarriesResidualAndWorstPoint) {
  NumericOptions opts;
  opts.points = 20;
  const Verdict v = equal(P("x1*p1"), P("x1*p1 + x0/1000"), EqualityMode::Exact, opts);
  EXPECT_FALSE(v.pass);
  EXPECT_FALSE(v.residual.is_zero());
  EXPECT_FALSE(v.evidence.pass);
  ASSERT_TRUE(v.evidence.worst.has_value());
  EXPECT_EQ(v.evidence.points, 20);
}

TEST(Equality, NumericModeDecidesBySampling) {
  NumericOptions opts;
  opts.points = 30;
  EXPECT_TRUE(equal(P("exp(x1)*exp(x1)"), P("exp(2*x1)"), EqualityMode::Numeric, opts).pass);
  EXPECT_FALSE(equal(P("exp(x1)"), P("1+x1"), EqualityMode::Numeric, opts).pass);
}

TEST(Sampling, TaggedStreamsAreReproducibleAndDistinct) {
  auto a = tagged_rng(42, "one");
  auto b = tagged_rng(42, "one");
  auto c = tagged_rng(42, "two");
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  auto r = tagged_rng(42, "shell");
  for (int i = 0; i < 50; ++i) {
    PhasePoint pt = sample_point(r, true);
    const Real p0 = pt.at("p0");
    const Real m = pt.at("m");
    EXPECT_GT(p0, 0);
    EXPECT_TRUE(close(p0 * p0, m * m + pt.at("psq"), 1e-14L));
  }
}

}  // namespace
