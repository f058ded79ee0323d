#ifndef KPA_CANONICAL_REPORT_HPP
#define KPA_CANONICAL_REPORT_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kpa/canonical/relation_table.hpp"
#include "kpa/expr/equality.hpp"

namespace kpa::canonical {

/// Verdict on one claimed relation (or one relation family).
struct Entry {
  std::string suite;
  std::string relation;  // printed claim
  std::string tag;       // equation tag, or "-" for checks without one
  std::string mode;      // exact | shell | numeric | series | structural
  bool pass = false;
  bool on_shell = false;      // holds only modulo the mass shell
  bool numeric_only = false;  // exact normalization exceeded its budget
  bool tripwire = false;      // symbolic pass contradicted by the numeric oracle
  std::string residual = "0";
  expr::NumericEvidence evidence;
  bool has_evidence = false;
  std::string note;
  std::uint64_t seed = 0;
};

struct Report {
  std::vector<Entry> entries;
  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] bool tripwire() const;
  void append(const Report& other);
};

/// SR-phase-space realization of a set of generators.
struct Realization {
  std::map<VarId, Normal> components;
  /// Fills generator values into a sampled point.
  std::function<void(expr::PhasePoint&)> assign;
};

/// Checks every relation of the table by the Poisson bracket of realizations.
/// Relations sharing a tag are reported as one entry.
Report verify_table(const Realization& realization, const RelationTable& claimed, expr::EqualityMode mode,
                    const expr::NumericOptions& numeric);

/// Decides lhs = rhs; lets callers pick the mode per relation.
using Comparator = std::function<expr::Verdict(const Normal&, const Normal&, const expr::NumericOptions&)>;
Report verify_table(const Realization& realization, const RelationTable& claimed, const Comparator& compare,
                    const expr::NumericOptions& numeric);

/// Folds one comparison into an entry: residual, evidence and tripwire.
void record(Entry& entry, const expr::Verdict& v);

/// "{a, b} = rhs" with generator keys.
std::string relation_text(VarId a, VarId b, const Normal& rhs);

}  // namespace kpa::canonical

#endif  // KPA_CANONICAL_REPORT_HPP
