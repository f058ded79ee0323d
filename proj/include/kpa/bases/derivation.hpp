#ifndef KPA_BASES_DERIVATION_HPP
#define KPA_BASES_DERIVATION_HPP

#include <optional>

#include "kpa/bases/basis.hpp"
#include "kpa/canonical/report.hpp"
#include "kpa/expr/equality.hpp"

namespace kpa::bases {

/// A, B, D from the defining functions, written in the deformed arguments.
DeformationTriple derive_abd(const DefiningFunctions& df);

/// The same triple before the change of variables, in SR scalars. Cheaper to
/// compare against a pulled-back triple than the deformed form.
DeformationTriple derive_abd_sr(const DefiningFunctions& df);

/// Compares a derived triple with a claimed one through the SR scalars.
struct TripleComparison {
  expr::Verdict A, B, D;
  [[nodiscard]] bool pass() const { return A.pass && B.pass && D.pass; }
};
TripleComparison compare_triples(const DefiningFunctions& df, const DeformationTriple& claimed, expr::EqualityMode mode,
                                 const expr::NumericOptions& numeric = {});

/// dA/dfirst D + 2 dA/dvec (A + vec B) - A B.
Normal constraint_value(const DeformationTriple& t);

struct ConstraintCheck {
  Normal value;  // normalized left-hand side; the claim is value = 1
  expr::Verdict verdict;
};
ConstraintCheck check_deformation_constraint(const DeformationTriple& t, const expr::NumericOptions& numeric = {});

/// F(f, vec g^2) = first and G(f, vec g^2) g = 1.
expr::Verdict check_inverses(const DefiningFunctions& df, expr::EqualityMode mode,
                             const expr::NumericOptions& numeric = {});
/// Shell mode for momentum-kind functions flagged with a shell, exact otherwise.
inline expr::Verdict check_inverses(const DefiningFunctions& df, bool shell) {
  return check_inverses(df, shell ? expr::EqualityMode::Shell : expr::EqualityMode::Exact);
}

/// Sets the deformed scalars of a sampled point: through f and g when the
/// functions are known, otherwise from fresh uniform draws.
std::function<void(expr::PhasePoint&)> deformed_prepare(SectorKind kind, const DefiningFunctions* df);

/// Identities that relate the deformed generators back to the SR ones. Those
/// that only hold on the mass shell are checked there unless a mode is forced.
canonical::Report onshell_identity_suite(const Basis& b, const expr::NumericOptions& numeric = {},
                                         std::optional<expr::EqualityMode> mode = std::nullopt);

/// Expansion around the undeformed point; order-0 coefficients must give the SR
/// counterparts. Higher coefficients of A are attached as notes.
canonical::Report poincare_limit(const Basis& b, int order);
canonical::Report poincare_limit(const DeformationTriple& t, const std::string& parameter, int order);

}  // namespace kpa::bases

#endif  // KPA_BASES_DERIVATION_HPP
