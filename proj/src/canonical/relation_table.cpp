#include "kpa/canonical/relation_table.hpp"

#include <algorithm>

#include "kpa/expr/errors.hpp"

namespace kpa::canonical {

void RelationTable::declare(VarId g) {
  if (!declared(g)) generators_.push_back(g);
}

void RelationTable::declare(const std::string& g) { declare(expr::symbol_id(g)); }

bool RelationTable::declared(VarId g) const {
  return std::find(generators_.begin(), generators_.end(), g) != generators_.end();
}

void RelationTable::add(VarId a, VarId b, const Normal& rhs, const std::string& tag) {
  for (const auto& r : relations_) {
    if ((r.a == a && r.b == b) || (r.a == b && r.b == a))
      throw Error("duplicate relation for {" + expr::var_info(a).key + ", " + expr::var_info(b).key + "}");
  }
  if (a == b && !rhs.is_zero()) throw Error("bracket of a generator with itself must vanish");
  declare(a);
  declare(b);
  relations_.push_back(Relation{a, b, rhs, tag});
}

void RelationTable::add(const std::string& a, const std::string& b, const Normal& rhs, const std::string& tag) {
  add(expr::symbol_id(a), expr::symbol_id(b), rhs, tag);
}

void RelationTable::merge(const RelationTable& other) {
  for (VarId g : other.generators_) declare(g);
  for (const auto& r : other.relations_) add(r.a, r.b, r.rhs, r.tag);
}

std::optional<Normal> RelationTable::lookup(VarId a, VarId b) const {
  if (a == b) return Normal{};
  for (const auto& r : relations_) {
    if (r.a == a && r.b == b) return r.rhs;
    if (r.a == b && r.b == a) return -r.rhs;
  }
  return std::nullopt;
}

void RelationTable::validate(const std::vector<VarId>& parameters) const {
  for (const auto& r : relations_) {
    for (VarId s : r.rhs.free_symbols()) {
      if (declared(s)) continue;
      if (std::find(parameters.begin(), parameters.end(), s) != parameters.end()) continue;
      throw Error("relation {" + expr::var_info(r.a).key + ", " + expr::var_info(r.b).key +
                  "} mentions undeclared symbol " + expr::var_info(s).key);
    }
  }
}

}  // namespace kpa::canonical
