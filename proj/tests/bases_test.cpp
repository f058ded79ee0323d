#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "kpa/bases/basis.hpp"
#include "kpa/bases/derivation.hpp"
#include "kpa/canonical/bracket.hpp"
#include "kpa/cli/commands.hpp"
#include "kpa/cli/config.hpp"
#include "kpa/cli/suites.hpp"
#include "kpa/expr/errors.hpp"
#include "kpa/expr/parser.hpp"
#include "kpa/expr/series.hpp"

namespace {

using namespace kpa;
using bases::DeformationTriple;
using expr::EqualityMode;
using expr::Normal;

// Oracles below are written out by hand from the defining formulas and do not
// go through the library's derivation code.
Normal H(const char* text) {
  expr::SymbolTable t = expr::SymbolTable::standard();
  for (const char* s : {"P0", "Psq", "X0bar", "Xsqbar"}) t.add_symbol(s);
  return expr::to_normal(expr::parse(text, t));
}

Normal hand_constraint(const Normal& A, const Normal& B, const Normal& D, const char* first, const char* vec) {
  return expr::diff(A, first) * D + 2 * expr::diff(A, vec) * (A + Normal::symbol(vec) * B) - A * B;
}

const char* kDsr1A = "kappa/2*(1 - exp(-2*P0/kappa)) + Psq/(2*kappa)";
const char* kDualA = "(1 - exp(-2*kappabar*X0bar))/(2*kappabar) + kappabar*Xsqbar/2";

TEST(Catalog, TriplesMatchHandTranscription) {
  const DeformationTriple k = bases::dsr1_triple();
  EXPECT_EQ(k.A, H(kDsr1A));
  EXPECT_EQ(k.B, H("-1/kappa"));
  EXPECT_EQ(k.D, Normal(1));
  const DeformationTriple d = bases::dual_triple();
  EXPECT_EQ(d.A, H(kDualA));
  EXPECT_EQ(d.B, H("-kappabar"));
  EXPECT_EQ(d.D, Normal(1));
}

TEST(Constraint, CatalogTriplesGiveExactlyOne) {
  EXPECT_EQ(bases::constraint_value(bases::dsr1_triple()), Normal(1));
  EXPECT_EQ(bases::constraint_value(bases::dual_triple()), Normal(1));
  EXPECT_EQ(bases::constraint_value(bases::poincare_triple(bases::SectorKind::Momentum)), Normal(1));
  EXPECT_EQ(hand_constraint(H(kDsr1A), H("-1/kappa"), Normal(1), "P0", "Psq"), Normal(1));
  EXPECT_EQ(hand_constraint(H(kDualA), H("-kappabar"), Normal(1), "X0bar", "Xsqbar"), Normal(1));
  const auto check = bases::check_deformation_constraint(bases::dual_triple());
  EXPECT_TRUE(check.verdict.pass);
}

// Flipping B leaves exp(-2P0/kappa) + Psq/kappa^2 instead of 1.
Normal mutant_residual() { return H("exp(-2*P0/kappa) + Psq/kappa^2 - 1"); }

TEST(Constraint, FlippedSignResidual) {
  DeformationTriple t = bases::dsr1_triple();
  t.B = -t.B;
  const Normal value = bases::constraint_value(t);
  EXPECT_EQ(value - 1, mutant_residual());
  EXPECT_EQ(hand_constraint(t.A, t.B, t.D, "P0", "Psq") - 1, mutant_residual());
  EXPECT_FALSE(bases::check_deformation_constraint(t).verdict.pass);
}

// Property: for A = P0 + c1 P0^2 + c2 Psq with B, D fixed, the constraint
// computed by the library equals the hand formula.
TEST(Constraint, AgreesWithHandFormulaOnRandomTriples) {
  kpatest::Gen g(41);
  for (int i = 0; i < 30; ++i) {
    DeformationTriple t;
    t.kind = bases::SectorKind::Momentum;
    t.A = Normal::symbol("P0") + g.rational() * Normal::symbol("P0").pow(2) + g.rational() * Normal::symbol("Psq");
    t.B = g.rational() / Normal::symbol("kappa");
    t.D = Normal(1) + g.rational() * Normal::symbol("P0") / Normal::symbol("kappa");
    EXPECT_EQ(bases::constraint_value(t), hand_constraint(t.A, t.B, t.D, "P0", "Psq")) << t.A.str();
  }
}

TEST(Derivation, DualTripleIsExact) {
  const DeformationTriple d = bases::derive_abd(bases::dual_functions());
  const DeformationTriple c = bases::dual_triple();
  const auto df = bases::dual_functions();
  expr::NumericOptions num;
  num.prepare = bases::deformed_prepare(bases::SectorKind::Spacetime, &df);
  EXPECT_TRUE(expr::equal(d.A, c.A, EqualityMode::Exact, num).pass) << d.A.str();
  EXPECT_TRUE(expr::equal(d.B, c.B, EqualityMode::Exact, num).pass) << d.B.str();
  EXPECT_TRUE(expr::equal(d.D, c.D, EqualityMode::Exact, num).pass) << d.D.str();
  EXPECT_TRUE(bases::compare_triples(bases::dual_functions(), c, EqualityMode::Exact).pass());
}

TEST(Derivation, Dsr1TripleHoldsOnlyOnShell) {
  const auto df = bases::dsr1_functions();
  const auto c = bases::dsr1_triple();
  EXPECT_FALSE(bases::compare_triples(df, c, EqualityMode::Exact).pass());
  const auto shell = bases::compare_triples(df, c, EqualityMode::Shell);
  EXPECT_TRUE(shell.pass());
  EXPECT_TRUE(shell.A.evidence.pass);
}

TEST(Derivation, PoincareFromIdentityFunctions) {
  const auto sr = bases::builtin_basis("sr");
  ASSERT_TRUE(sr.functions.has_value());
  const auto t = bases::derive_abd(*sr.functions);
  EXPECT_EQ(t.A, Normal::symbol("P0"));
  EXPECT_TRUE(t.B.is_zero());
  EXPECT_EQ(t.D, Normal(1));
}

TEST(Inverses, ShellForDsr1ExactForDual) {
  EXPECT_FALSE(bases::check_inverses(bases::dsr1_functions(), EqualityMode::Exact).pass);
  EXPECT_TRUE(bases::check_inverses(bases::dsr1_functions(), EqualityMode::Shell).pass);
  EXPECT_TRUE(bases::check_inverses(bases::dual_functions(), EqualityMode::Exact).pass);
}

TEST(Inverses, InconsistentPairIsRejected) {
  auto df = bases::dual_functions();
  df.G = df.G * 2;
  EXPECT_THROW(bases::basis_from_functions(df, "broken"), Error);
}

// Hand Taylor expansion in 1/kappa: A = P0 + (Psq/2 - P0^2)/kappa + 2 P0^3/(3 kappa^2) + ...
TEST(Limits, SeriesCoefficientsOfA) {
  const auto s = expr::series(bases::dsr1_triple().A, "kappa", std::nullopt, 2);
  EXPECT_EQ(s.coefficient(0), H("P0"));
  EXPECT_EQ(s.coefficient(1), H("Psq/2 - P0^2"));
  EXPECT_EQ(s.coefficient(2), H("2*P0^3/3"));
  const auto d = expr::series(bases::dual_triple().A, "kappabar", expr::Rational(0), 1);
  EXPECT_EQ(d.coefficient(0), H("X0bar"));
  EXPECT_EQ(d.coefficient(1), H("Xsqbar/2 - X0bar^2"));
}

// Numeric Taylor oracle: kappa (A - P0) tends to the order-1 coefficient.
TEST(Limits, NumericTaylorOracle) {
  auto rng = expr::tagged_rng(5, "taylor");
  for (int i = 0; i < 20; ++i) {
    const long double p0 = expr::uniform(rng, -2, 2);
    const long double pp = expr::uniform(rng, 0, 3);
    const long double kappa = 1e5L;
    const long double a = kappa / 2 * (1 - std::exp(-2 * p0 / kappa)) + pp / (2 * kappa);
    const long double estimate = kappa * (a - p0);
    EXPECT_NEAR(static_cast<double>(estimate), static_cast<double>(pp / 2 - p0 * p0), 1e-3);
  }
}

TEST(Limits, ReportPassesForBothBases) {
  for (const char* name : {"dsr1", "dual"}) {
    const auto r = bases::poincare_limit(bases::builtin_basis(name), 2);
    EXPECT_FALSE(r.entries.empty());
    EXPECT_TRUE(r.all_pass()) << name;
  }
}

// The flipped-sign basis: Jacobi on (N1, N2, P1) leaves -P2 times the
// constraint residual, in the same units as the constraint check.
TEST(Mutant, JacobiResidualTracksConstraintResidual) {
  const cli::BasisConfig cfg = cli::resolve_basis(std::string(KPA_TEST_DATA) + "/mutant.kpa");
  const auto alg = cli::claimed_algebra(cfg.basis, {"N1", "N2", "N3", "M1", "M2", "M3", "P0", "P1", "P2", "P3"});
  const auto engine = canonical::table_engine(alg);
  const Normal j = canonical::jacobiator(engine, Normal::symbol("N1"), Normal::symbol("N2"), Normal::symbol("P1"));
  const Normal expected = -Normal::symbol("P2") * bases::in_generators(cfg.basis, mutant_residual());
  EXPECT_EQ(j, expected) << j.str();
  const Normal value = bases::constraint_value(bases::effective_triple(cfg.basis));
  EXPECT_EQ(value - 1, mutant_residual());
}

TEST(Realization, RotationsAreUndeformed) {
  for (const char* name : {"dsr1", "dual"}) {
    const auto b = bases::builtin_basis(name);
    const auto sr = bases::builtin_basis("sr");
    for (int i = 1; i <= 3; ++i)
      EXPECT_EQ(b.get(bases::Role::Rotation, i).realization, sr.get(bases::Role::Rotation, i).realization);
  }
}

TEST(Realization, OnShellIdentitiesReport) {
  const auto r = bases::onshell_identity_suite(bases::builtin_basis("dsr1"));
  ASSERT_FALSE(r.entries.empty());
  EXPECT_TRUE(r.all_pass());
  bool shell_only = false;
  for (const auto& e : r.entries) shell_only = shell_only || e.on_shell;
  EXPECT_TRUE(shell_only);
  const auto dual = bases::onshell_identity_suite(bases::builtin_basis("dual"));
  for (const auto& e : dual.entries) EXPECT_FALSE(e.on_shell) << e.relation;
}

TEST(Realization, ForcedExactModeExposesShellOnlyIdentities) {
  const auto r = bases::onshell_identity_suite(bases::builtin_basis("dsr1"), {}, EqualityMode::Exact);
  bool failed = false;
  for (const auto& e : r.entries) {
    EXPECT_FALSE(e.on_shell) << e.relation;
    if (!e.pass) {
      failed = true;
      EXPECT_TRUE(e.evidence.worst.has_value()) << e.relation;
    }
  }
  EXPECT_TRUE(failed);
}

TEST(Builtins, UnknownNameIsAConfigError) {
  EXPECT_THROW(bases::builtin_basis("nope"), ConfigError);
  EXPECT_EQ(bases::generator_name("dual", bases::Role::Boost, 2), "N2bar");
  EXPECT_EQ(bases::levi_civita(1, 2, 3), 1);
  EXPECT_EQ(bases::levi_civita(2, 1, 3), -1);
  EXPECT_EQ(bases::levi_civita(1, 1, 3), 0);
}

}  // namespace
