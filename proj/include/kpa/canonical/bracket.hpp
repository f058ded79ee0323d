#ifndef KPA_CANONICAL_BRACKET_HPP
#define KPA_CANONICAL_BRACKET_HPP

#include <array>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "kpa/canonical/relation_table.hpp"
#include "kpa/expr/normal.hpp"

namespace kpa::canonical {

/// Diagonal of eta_{mu nu} = (-, +, +, +).
struct MetricSignature {
  static constexpr std::array<int, 4> kDiagonal{-1, 1, 1, 1};
  static constexpr int eta(int mu) { return kDiagonal.at(static_cast<std::size_t>(mu)); }
};

/// Canonical bracket on SR phase space:
/// sum_mu eta_mu (da/dx_mu db/dp_mu - db/dx_mu da/dp_mu).
Normal poisson(const Normal& a, const Normal& b);

using Bracket = std::function<Normal(const Normal&, const Normal&)>;

/// Generators split into a commuting subalgebra and outer generators, with the
/// declared relations between them. Coefficient functions may only take
/// commuting generators (and parameters) as arguments.
struct AbstractAlgebra {
  RelationTable table;
  std::set<VarId> commuting;
  std::vector<VarId> parameters;

  [[nodiscard]] bool is_generator(VarId v) const { return table.declared(v) || commuting.count(v) > 0; }
};

/// {a, b} = sum_{g,h} da/dg db/dh {g, h}_table. Throws on an undeclared pair
/// or on an atom whose argument involves a non-commuting generator.
Normal table_bracket(const AbstractAlgebra& alg, const Normal& a, const Normal& b);

Bracket poisson_engine();
Bracket table_engine(const AbstractAlgebra& alg);

/// {a,{b,c}} + {b,{c,a}} + {c,{a,b}}.
Normal jacobiator(const Bracket& bracket, const Normal& a, const Normal& b, const Normal& c);

}  // namespace kpa::canonical

#endif  // KPA_CANONICAL_BRACKET_HPP
