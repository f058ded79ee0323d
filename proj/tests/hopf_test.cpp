#include <gtest/gtest.h>

#include "gen.hpp"
#include "kpa/bases/basis.hpp"
#include "kpa/canonical/bracket.hpp"
#include "kpa/cli/commands.hpp"
#include "kpa/cli/config.hpp"
#include "kpa/cli/suites.hpp"
#include "kpa/hopf/coproduct.hpp"

namespace {

using namespace kpa;
using expr::Normal;
using hopf::Coproduct;

Normal S(const std::string& name) { return Normal::symbol(name); }

canonical::RelationTable sector_table(const std::string& basis, const Coproduct& c) {
  return cli::claimed_algebra(bases::builtin_basis(basis), c.generators).table;
}

struct Case {
  const char* coproduct;
  const char* basis;
};
const Case kCases[] = {{"dsr1-momentum", "dsr1"},
                       {"dsr1-spacetime", "dsr1"},
                       {"dual-momentum", "dual"},
                       {"dual-spacetime", "dual"},
                       {"primitive", "sr"},
                       {"primitive-spacetime", "sr"}};

TEST(Coproduct, CoassociativeWithCounit) {
  for (const auto& c : kCases) {
    const Coproduct cp = hopf::builtin_coproduct(c.coproduct);
    EXPECT_TRUE(hopf::check_coassociativity(cp).pass) << c.coproduct;
    EXPECT_TRUE(hopf::check_counit(cp).pass) << c.coproduct;
  }
}

TEST(Coproduct, HomomorphismOnSectorAlgebra) {
  for (const auto& c : kCases) {
    const Coproduct cp = hopf::builtin_coproduct(c.coproduct);
    const auto r = hopf::check_homomorphism(cp, sector_table(c.basis, cp));
    EXPECT_TRUE(r.pass) << c.coproduct << ": " << r.generator << " " << r.detail;
  }
}

TEST(Coproduct, CorruptedTwistIsNotCoassociative) {
  const Coproduct bad = hopf::builtin_coproduct("corrupted");
  const auto r = hopf::check_coassociativity(bad);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.residual.is_zero());
  EXPECT_FALSE(r.generator.empty());
  EXPECT_THROW(hopf::dualize_twist(bad), hopf::HopfError);
}

TEST(Coproduct, ExponentialsOfPrimitiveGenerators) {
  const Coproduct cp = hopf::builtin_coproduct("dsr1-momentum");
  const auto d = hopf::apply_coproduct(cp, expr::exp(S("P0") / S("kappa")));
  const auto expected = hopf::tensor(expr::exp(S("P0") / S("kappa")), expr::exp(S("P0") / S("kappa")), cp.generators);
  EXPECT_EQ(d, expected) << d.str();
  EXPECT_THROW(hopf::apply_coproduct(cp, expr::exp(S("P1"))), Error);
}

// Property: Delta is multiplicative on random polynomials in the generators.
TEST(Coproduct, MultiplicativeOnPolynomials) {
  const Coproduct cp = hopf::builtin_coproduct("dual-spacetime");
  kpatest::Gen g(51);
  for (int i = 0; i < 30; ++i) {
    Normal a = g.poly(cp.generators, 2, 2);
    Normal b = g.poly(cp.generators, 2, 2);
    EXPECT_EQ(hopf::apply_coproduct(cp, a * b), hopf::apply_coproduct(cp, a) * hopf::apply_coproduct(cp, b))
        << a.str() << " | " << b.str();
    EXPECT_EQ(hopf::apply_coproduct(cp, a + b), hopf::apply_coproduct(cp, a) + hopf::apply_coproduct(cp, b));
  }
}

TEST(Coproduct, ParsedTwistMatchesBuiltin) {
  const Coproduct cp = hopf::builtin_coproduct("dsr1-momentum");
  expr::SymbolTable t = expr::SymbolTable::standard();
  for (const auto& gname : cp.generators) t.add_symbol(gname);
  const auto parsed = hopf::parse_tensor("P2(x)1 + exp(-P0/kappa)(x)P2", t, cp.generators);
  EXPECT_EQ(parsed, cp.image("P2"));
  EXPECT_THROW(hopf::parse_tensor("P2(x)", t, cp.generators), ParseError);
}

TEST(Dualization, TwistGivesLieSectorOfPartners) {
  const auto claimed = bases::claimed_tables(bases::builtin_basis("dsr1")).phase;
  const auto k = hopf::dualize_twist(hopf::builtin_coproduct("dsr1-momentum"));
  for (int i = 1; i <= 3; ++i) {
    const auto x0 = expr::symbol_id("X0");
    const auto xi = expr::symbol_id("X" + std::to_string(i));
    EXPECT_EQ(*k.lookup(x0, xi), *claimed.lookup(x0, xi));
    EXPECT_EQ(*k.lookup(x0, xi), -S("X" + std::to_string(i)) / S("kappa"));
  }
  const auto dual_claimed = bases::claimed_tables(bases::builtin_basis("dual")).phase;
  const auto d = hopf::dualize_twist(hopf::builtin_coproduct("dual-spacetime"));
  for (int i = 1; i <= 3; ++i) {
    const auto p0 = expr::symbol_id("P0bar");
    const auto pi = expr::symbol_id("P" + std::to_string(i) + "bar");
    EXPECT_EQ(*d.lookup(p0, pi), *dual_claimed.lookup(p0, pi));
  }
}

TEST(Dualization, ZeroTwistCommutes) {
  const Coproduct cp = hopf::twist_coproduct("flat", hopf::Sector::Momenta, {"P0", "P1", "P2", "P3"},
                                             {"X0", "X1", "X2", "X3"}, Normal(0));
  const auto table = hopf::dualize_twist(cp);
  ASSERT_FALSE(table.relations().empty());
  for (const auto& r : table.relations()) EXPECT_TRUE(r.rhs.is_zero());
}

// Round trip: the twist read back from a constructed coproduct is the one put in.
TEST(Dualization, TwistParameterRoundTrip) {
  kpatest::Gen g(52);
  for (int i = 0; i < 20; ++i) {
    const Normal lambda = g.rational() / (S("kappa") + Normal(g.integer(1, 3)));
    const Coproduct cp = hopf::twist_coproduct("t", hopf::Sector::Coordinates, {"X0", "X1", "X2", "X3"},
                                               {"P0", "P1", "P2", "P3"}, lambda);
    EXPECT_EQ(hopf::twist_parameter(cp), lambda);
    EXPECT_TRUE(hopf::check_coassociativity(cp).pass);
  }
}

void expect_cross_matches_claims(const char* mom, const char* pos, const char* basis) {
  const auto claimed = bases::claimed_tables(bases::builtin_basis(basis)).phase;
  const auto cross = hopf::heisenberg_cross(hopf::builtin_coproduct(mom), hopf::builtin_coproduct(pos));
  ASSERT_EQ(cross.relations().size(), 16u);
  for (const auto& r : cross.relations()) {
    const auto c = claimed.lookup(r.a, r.b);
    ASSERT_TRUE(c.has_value()) << expr::var_info(r.a).key << " " << expr::var_info(r.b).key;
    EXPECT_EQ(r.rhs, *c) << expr::var_info(r.a).key << " " << expr::var_info(r.b).key;
  }
  // Argument order does not matter.
  const auto swapped = hopf::heisenberg_cross(hopf::builtin_coproduct(pos), hopf::builtin_coproduct(mom));
  for (const auto& r : swapped.relations()) EXPECT_EQ(*cross.lookup(r.a, r.b), r.rhs);
}

TEST(HeisenbergDouble, ReproducesDeformedPhaseSpaces) {
  expect_cross_matches_claims("dsr1-momentum", "dsr1-spacetime", "dsr1");
  expect_cross_matches_claims("dual-momentum", "dual-spacetime", "dual");
}

TEST(HeisenbergDouble, PrimitiveGivesCanonicalBracket) {
  const auto cross = hopf::heisenberg_cross(hopf::builtin_coproduct("primitive"),
                                            hopf::builtin_coproduct("primitive-spacetime"));
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const auto x = expr::symbol_id("x" + std::to_string(mu));
      const auto p = expr::symbol_id("p" + std::to_string(nu));
      const int eta = mu == nu ? canonical::MetricSignature::eta(mu) : 0;
      EXPECT_EQ(*cross.lookup(x, p), Normal(eta));
    }
}

TEST(HeisenbergDouble, NeedsOnePrimitiveSide) {
  EXPECT_THROW(hopf::heisenberg_cross(hopf::builtin_coproduct("dsr1-momentum"),
                                      hopf::builtin_coproduct("dual-spacetime")),
               Error);
}

// Two routes to the cross relations: the Heisenberg double and the Poisson
// bracket of the phase-space realizations.
TEST(HeisenbergDouble, AgreesWithPoissonEngine) {
  for (const char* basis : {"dsr1", "dual"}) {
    const cli::BasisConfig cfg = cli::resolve_basis(basis);
    const std::string prefix = std::string(basis) == "dsr1" ? "dsr1-" : "dual-";
    const auto cross = hopf::heisenberg_cross(hopf::builtin_coproduct(prefix + "momentum"),
                                              hopf::builtin_coproduct(prefix + "spacetime"));
    cli::SuiteConfig opts;
    const auto compare = cli::comparator(opts, cfg.basis);
    for (const auto& r : cross.relations()) {
      const Normal lhs = canonical::poisson(cli::to_phase_space(cfg.basis, Normal::var(r.a)),
                                            cli::to_phase_space(cfg.basis, Normal::var(r.b)));
      const auto v = compare(lhs, cli::to_phase_space(cfg.basis, r.rhs), cli::numeric_options(opts, "cross"));
      EXPECT_TRUE(v.pass) << basis << " " << expr::var_info(r.a).key << " " << expr::var_info(r.b).key;
      EXPECT_EQ(v.mode, expr::EqualityMode::Exact);
    }
  }
}

TEST(Pairing, FrozenConvention) {
  const hopf::Pairing pr;
  EXPECT_EQ(pr.value(hopf::Sector::Momenta, 0, 0), expr::Rational(1));
  EXPECT_EQ(pr.value(hopf::Sector::Momenta, 1, 1), expr::Rational(-1));
  EXPECT_EQ(pr.value(hopf::Sector::Coordinates, 0, 0), expr::Rational(-1));
  EXPECT_EQ(pr.value(hopf::Sector::Momenta, 1, 2), expr::Rational(0));
}

}  // namespace
