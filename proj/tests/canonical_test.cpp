#include <gtest/gtest.h>

#include <set>

#include "gen.hpp"
#include "kpa/bases/basis.hpp"
#include "kpa/canonical/bracket.hpp"
#include "kpa/canonical/relation_table.hpp"
#include "kpa/canonical/report.hpp"
#include "kpa/canonical/tags.hpp"
#include "kpa/cli/commands.hpp"
#include "kpa/cli/suites.hpp"
#include "kpa/expr/parser.hpp"

namespace {

using namespace kpa;
using canonical::poisson;
using expr::Normal;

Normal S(const std::string& name) { return Normal::symbol(name); }
Normal P(const char* text) { return expr::to_normal(expr::parse(text)); }

const std::vector<std::string>& phase_pool() {
  static const std::vector<std::string> pool{"x0", "x1", "x2", "p0", "p1", "p2"};
  return pool;
}

TEST(Poisson, CanonicalPairs) {
  const char* x[] = {"x0", "x1", "x2", "x3"};
  const char* p[] = {"p0", "p1", "p2", "p3"};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const int eta = mu == nu ? canonical::MetricSignature::eta(mu) : 0;
      EXPECT_EQ(poisson(S(x[mu]), S(p[nu])), Normal(eta)) << mu << nu;
      EXPECT_TRUE(poisson(S(x[mu]), S(x[nu])).is_zero());
      EXPECT_TRUE(poisson(S(p[mu]), S(p[nu])).is_zero());
    }
}

TEST(Poisson, AntisymmetryAndLeibniz) {
  kpatest::Gen g(21);
  for (int i = 0; i < 40; ++i) {
    Normal a = g.rational_function(phase_pool(), true);
    Normal b = g.poly(phase_pool()) / g.positive({"x1", "p1"});
    Normal c = g.poly(phase_pool());
    SCOPED_TRACE(a.str() + " | " + b.str() + " | " + c.str());
    EXPECT_EQ(poisson(a, b), -poisson(b, a));
    EXPECT_EQ(poisson(a, b * c), poisson(a, b) * c + b * poisson(a, c));
    EXPECT_EQ(poisson(a, b + c), poisson(a, b) + poisson(a, c));
  }
}

TEST(Poisson, JacobiOnRandomFunctions) {
  kpatest::Gen g(22);
  const auto engine = canonical::poisson_engine();
  for (int i = 0; i < 20; ++i) {
    Normal a = g.rational_function(phase_pool());
    Normal b = g.poly(phase_pool(), 3, 3);
    Normal c = g.poly(phase_pool(), 3, 3) + expr::exp(S("p0") / S("kappa"));
    SCOPED_TRACE(a.str() + " | " + b.str() + " | " + c.str());
    EXPECT_TRUE(canonical::jacobiator(engine, a, b, c).is_zero());
  }
}

TEST(RelationTable, LookupAndValidation) {
  canonical::RelationTable t("toy");
  t.declare("u");
  t.declare("v");
  t.declare("w");
  t.add("u", "v", S("w"), "T1");
  EXPECT_EQ(*t.lookup(expr::symbol_id("u"), expr::symbol_id("v")), S("w"));
  EXPECT_EQ(*t.lookup(expr::symbol_id("v"), expr::symbol_id("u")), -S("w"));
  EXPECT_FALSE(t.lookup(expr::symbol_id("u"), expr::symbol_id("w")).has_value());
  EXPECT_THROW(t.add("v", "u", S("w")), Error);
  EXPECT_THROW(t.add("w", "w", S("u")), Error);
  t.add("v", "w", S("zz"));
  EXPECT_THROW(t.validate({}), Error);
  EXPECT_NO_THROW(t.validate({expr::symbol_id("zz")}));
}

// so(3) with {u_i, u_j} = eps_ijk u_k: table engine against a realization
// u_i = eps_ijk x_j p_k.
canonical::AbstractAlgebra so3() {
  canonical::AbstractAlgebra alg;
  const std::string u[] = {"u1", "u2", "u3"};
  for (const auto& n : u) alg.table.declare(n);
  alg.table.add("u1", "u2", S("u3"));
  alg.table.add("u2", "u3", S("u1"));
  alg.table.add("u3", "u1", S("u2"));
  return alg;
}

TEST(TableEngine, Jacobiator) {
  const auto alg = so3();
  const auto engine = canonical::table_engine(alg);
  EXPECT_TRUE(canonical::jacobiator(engine, S("u1"), S("u2"), S("u3")).is_zero());
  EXPECT_TRUE(canonical::jacobiator(engine, S("u1") * S("u2"), S("u3"), S("u1") + S("u2")).is_zero());
  // A broken structure constant is caught.
  canonical::AbstractAlgebra bad;
  for (const char* n : {"u1", "u2", "u3"}) bad.table.declare(n);
  bad.table.add("u1", "u2", S("u3"));
  bad.table.add("u2", "u3", Normal(0));
  bad.table.add("u3", "u1", S("u1"));
  EXPECT_FALSE(canonical::jacobiator(canonical::table_engine(bad), S("u1"), S("u2"), S("u3")).is_zero());
}

TEST(TableEngine, UndeclaredPairsAndNonCommutingAtomsThrow) {
  canonical::AbstractAlgebra alg;
  alg.table.declare("u1");
  alg.table.declare("u2");
  EXPECT_THROW(canonical::table_bracket(alg, S("u1"), S("u2")), Error);
  alg.table.add("u1", "u2", S("u1"));
  EXPECT_THROW(canonical::table_bracket(alg, expr::exp(S("u1")), S("u2")), Error);
  alg.commuting.insert(expr::symbol_id("c0"));
  EXPECT_TRUE(canonical::table_bracket(alg, expr::exp(S("c0")), S("c0")).is_zero());
}

/// Random polynomial in generator symbols of the basis.
Normal generator_poly(kpatest::Gen& g, const bases::Basis& b, int terms) {
  std::vector<std::string> names;
  for (const auto& gen : b.generators) names.push_back(gen.name);
  return g.poly(names, terms, 2);
}

// Homomorphism: the claimed table bracket, realized, equals the Poisson
// bracket of the realizations.
void check_table_matches_poisson(const std::string& basis, std::uint64_t seed) {
  const cli::BasisConfig cfg = cli::resolve_basis(basis);
  const auto alg = cli::claimed_algebra(cfg.basis);
  kpatest::Gen g(seed);
  cli::SuiteConfig opts;
  opts.samples = 20;
  const auto compare = cli::comparator(opts, cfg.basis);
  for (int i = 0; i < 6; ++i) {
    Normal a = generator_poly(g, cfg.basis, 2);
    Normal b = generator_poly(g, cfg.basis, 2);
    SCOPED_TRACE(basis + ": " + a.str() + " | " + b.str());
    const Normal via_table = cli::to_phase_space(cfg.basis, canonical::table_bracket(alg, a, b));
    const Normal via_poisson =
        poisson(cli::to_phase_space(cfg.basis, a), cli::to_phase_space(cfg.basis, b));
    const auto v = compare(via_table, via_poisson, cli::numeric_options(opts, "table-vs-poisson"));
    EXPECT_TRUE(v.pass) << v.residual.str();
  }
}

TEST(TableEngine, AgreesWithPoissonOnSr) { check_table_matches_poisson("sr", 31); }
TEST(TableEngine, AgreesWithPoissonOnDual) { check_table_matches_poisson("dual", 32); }
TEST(TableEngine, AgreesWithPoissonOnDsr1) { check_table_matches_poisson("dsr1", 33); }

TEST(Report, VerifyTableFlagsWrongClaims) {
  const bases::Basis sr = bases::builtin_basis("sr");
  canonical::RelationTable claimed("probe");
  for (const char* n : {"x1", "p1", "p2"}) claimed.declare(n);
  claimed.add("x1", "p1", Normal(1), "good");
  claimed.add("x1", "p2", Normal(1), "bad");
  expr::NumericOptions num;
  num.points = 10;
  const canonical::Report r = canonical::verify_table(sr.realization(), claimed, expr::EqualityMode::Exact, num);
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_TRUE(r.entries[0].pass);
  EXPECT_FALSE(r.entries[1].pass);
  EXPECT_NE(r.entries[1].residual, "0");
  EXPECT_TRUE(r.entries[1].has_evidence);
  EXPECT_FALSE(r.all_pass());
  EXPECT_FALSE(r.tripwire());
}

TEST(Tags, TableIsWellFormed) {
  std::set<std::string> keys;
  for (const auto& t : canonical::tag_table()) {
    EXPECT_TRUE(keys.insert(std::string(t.key)).second) << "duplicate key " << t.key;
    EXPECT_FALSE(t.tag.empty()) << t.key;
    EXPECT_EQ(t.tag.find(' '), std::string_view::npos) << t.tag;
    EXPECT_FALSE(t.claim.empty()) << t.key;
    EXPECT_EQ(canonical::tag(t.key), std::string(t.tag));
  }
  EXPECT_THROW(canonical::tag("no.such.key"), Error);
  EXPECT_EQ(canonical::claim_for_tag(canonical::tag("dsr1.phase.x0pi")), "{X_0, P_i} = P_i/kappa");
  EXPECT_EQ(canonical::claim_for_tag("no-such-tag"), "");
}

}  // namespace
