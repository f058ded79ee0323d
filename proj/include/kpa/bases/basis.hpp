#ifndef KPA_BASES_BASIS_HPP
#define KPA_BASES_BASIS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kpa/canonical/relation_table.hpp"
#include "kpa/canonical/report.hpp"
#include "kpa/expr/normal.hpp"

namespace kpa::bases {

using expr::Normal;
using expr::Rational;
using expr::VarId;

enum class SectorKind { Momentum, Spacetime };

/// Symbols carrying the scalar arguments of the defining functions.
/// Momentum kind: (p0, psq) and (P0, Psq). Spacetime kind: (x0, xsq) and (X0bar, Xsqbar).
struct Arguments {
  VarId sr_first;
  VarId sr_vec;
  VarId deformed_first;
  VarId deformed_vec;
  std::string sr_letter;  // "p" or "x"
};
const Arguments& arguments(SectorKind kind);

/// f, g in the SR scalars and their inverses F, G in the deformed scalars.
struct DefiningFunctions {
  SectorKind kind = SectorKind::Momentum;
  Normal f;
  Normal g;
  Normal F;
  Normal G;
};

/// Coefficients A, B, D in the deformed scalars.
struct DeformationTriple {
  SectorKind kind = SectorKind::Momentum;
  Normal A;
  Normal B;
  Normal D;
};

enum class Role { Rotation, Boost, Momentum, Coordinate };

struct Generator {
  std::string name;
  Role role = Role::Rotation;
  int index = 0;  // 1..3 for rotations and boosts, 0..3 otherwise
  Normal realization;
  [[nodiscard]] VarId id() const { return expr::symbol_id(name); }
  [[nodiscard]] Normal symbol() const { return Normal::symbol(name); }
};

struct Basis {
  std::string name;
  std::string family;  // sr | dsr1 | dual | custom
  std::optional<DefiningFunctions> functions;
  /// Coefficients supplied explicitly instead of the cataloged or derived ones.
  std::optional<DeformationTriple> triple_override;
  std::vector<Generator> generators;
  bool shell = false;
  std::string parameter;  // kappa | kappabar | empty for the undeformed basis

  [[nodiscard]] const Generator* find(Role role, int index) const;
  [[nodiscard]] const Generator& get(Role role, int index) const;
  [[nodiscard]] const Generator* find(const std::string& name) const;
  [[nodiscard]] bool has(Role role) const;
  [[nodiscard]] std::vector<const Generator*> of(Role role) const;
  [[nodiscard]] canonical::Realization realization() const;
  /// Sector whose scalars are deformed: Momentum for dsr1-like, Spacetime for dual-like.
  [[nodiscard]] SectorKind sector() const;
};

/// Generator name for a role and index under a naming family.
std::string generator_name(const std::string& family, Role role, int index);

/// sr, dsr1 or dual; throws ConfigError otherwise.
Basis builtin_basis(const std::string& name);

/// Optional explicit realizations keyed by generator name (X0.., P0.., N1..).
using Overrides = std::map<std::string, Normal>;

/// Realizes a basis from defining functions. Momentum kind: P0 = f, P_i = p_i g;
/// spacetime kind: X0 = f, X_i = x_i g. Rotations are eps_ijk x_j p_k, boosts
/// default to x_i p0 - x0 p_i. Throws when the inverse pair is inconsistent.
Basis basis_from_functions(const DefiningFunctions& df, const std::string& name, const Overrides& overrides = {},
                           bool shell = false, const std::string& naming = {});

/// The two defining-function sets of the catalog.
DefiningFunctions dsr1_functions();
DefiningFunctions dual_functions();

/// The cataloged triples written out explicitly.
DeformationTriple dsr1_triple();
DeformationTriple dual_triple();
DeformationTriple poincare_triple(SectorKind kind);

/// Triple used by the basis: override, catalog entry, or derived.
DeformationTriple effective_triple(const Basis& b);

/// Replaces the deformed vector scalar by the sum of squares of the basis generators.
Normal in_generators(const Basis& b, const Normal& e);

/// Replaces the deformed scalars by f and vec^2 g^2 in SR variables.
Normal pull_back(const DefiningFunctions& df, const Normal& e);

/// Claimed relation tables, in generator symbols.
struct ClaimedTables {
  canonical::RelationTable lorentz;
  canonical::RelationTable rotation;  // rotations acting on momenta and coordinates
  canonical::RelationTable boost;     // boosts acting on momenta and coordinates
  canonical::RelationTable phase;     // momenta and coordinates among themselves
};
ClaimedTables claimed_tables(const Basis& b);

/// eps_ijk for i, j, k in 1..3.
int levi_civita(int i, int j, int k);

}  // namespace kpa::bases

#endif  // KPA_BASES_BASIS_HPP
