#ifndef KPA_CANONICAL_RELATION_TABLE_HPP
#define KPA_CANONICAL_RELATION_TABLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "kpa/expr/normal.hpp"

namespace kpa::canonical {

using expr::Normal;
using expr::VarId;

/// One claimed bracket {a, b} = rhs. Stored Poisson-side: the quantum
/// commutator is [a, b] = i * rhs.
struct Relation {
  VarId a = 0;
  VarId b = 0;
  Normal rhs;
  std::string tag;  // report tag of the equation block
};

class RelationTable {
 public:
  RelationTable() = default;
  explicit RelationTable(std::string name) : name_(std::move(name)) {}

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::vector<Relation>& relations() const { return relations_; }
  [[nodiscard]] const std::vector<VarId>& generators() const { return generators_; }
  [[nodiscard]] bool empty() const { return relations_.empty(); }

  void declare(VarId g);
  void declare(const std::string& g);
  /// Adds {a, b} = rhs. A pair already present in either order is an error.
  void add(VarId a, VarId b, const Normal& rhs, const std::string& tag = {});
  void add(const std::string& a, const std::string& b, const Normal& rhs, const std::string& tag = {});
  /// Appends every relation of another table (generators included).
  void merge(const RelationTable& other);

  /// {a, b}, or -{b, a} when only the reverse is stored.
  [[nodiscard]] std::optional<Normal> lookup(VarId a, VarId b) const;
  [[nodiscard]] bool declared(VarId g) const;

  /// Throws when a right-hand side mentions an undeclared generator symbol.
  void validate(const std::vector<VarId>& parameters) const;

  /// Always true: stored values are commutators with the overall i removed.
  static constexpr bool kIStripped = true;

 private:
  std::string name_;
  std::vector<VarId> generators_;
  std::vector<Relation> relations_;
};

}  // namespace kpa::canonical

#endif  // KPA_CANONICAL_RELATION_TABLE_HPP
