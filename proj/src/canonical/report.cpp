#include "kpa/canonical/report.hpp"

#include <algorithm>

#include "kpa/canonical/bracket.hpp"
#include "kpa/canonical/tags.hpp"
#include "kpa/expr/errors.hpp"

namespace kpa::canonical {

bool Report::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.pass; });
}

bool Report::tripwire() const {
  return std::any_of(entries.begin(), entries.end(), [](const Entry& e) { return e.tripwire; });
}

void Report::append(const Report& other) { entries.insert(entries.end(), other.entries.begin(), other.entries.end()); }

std::string relation_text(VarId a, VarId b, const Normal& rhs) {
  return "{" + expr::var_info(a).key + ", " + expr::var_info(b).key + "} = " + rhs.str();
}

void record(Entry& entry, const expr::Verdict& v) {
  const bool first_failure = entry.pass && !v.pass;
  if (!v.pass) entry.pass = false;
  if (v.numeric_only) entry.numeric_only = true;
  if (first_failure || (entry.residual == "0" && !v.residual.is_zero())) entry.residual = v.residual.str();
  const int points = (entry.has_evidence ? entry.evidence.points : 0) + v.evidence.points;
  const bool evidence_pass = (!entry.has_evidence || entry.evidence.pass) && v.evidence.pass;
  if (!entry.has_evidence || v.evidence.max_deviation > entry.evidence.max_deviation) entry.evidence = v.evidence;
  entry.evidence.points = points;
  entry.evidence.pass = evidence_pass;
  entry.has_evidence = true;
  if (v.mode == expr::EqualityMode::Shell) {
    entry.on_shell = true;
    entry.mode = "shell";
  }
  if (entry.note.empty() && !v.note.empty()) entry.note = v.note;
  const bool symbolic = v.mode != expr::EqualityMode::Numeric && !v.numeric_only;
  if (symbolic && v.pass && !v.evidence.pass) entry.tripwire = true;
}

Report verify_table(const Realization& realization, const RelationTable& claimed, expr::EqualityMode mode,
                    const expr::NumericOptions& numeric) {
  return verify_table(
      realization, claimed,
      [mode](const Normal& l, const Normal& r, const expr::NumericOptions& o) { return expr::equal(l, r, mode, o); },
      numeric);
}

Report verify_table(const Realization& realization, const RelationTable& claimed, const Comparator& compare,
                    const expr::NumericOptions& numeric) {
  Report report;
  std::map<std::string, std::size_t> by_tag;
  std::map<std::string, int> counts;
  for (const auto& r : claimed.relations()) {
    auto ia = realization.components.find(r.a);
    auto ib = realization.components.find(r.b);
    if (ia == realization.components.end() || ib == realization.components.end()) {
      VarId missing = ia == realization.components.end() ? r.a : r.b;
      throw Error("generator " + expr::var_info(missing).key + " has no realization");
    }
    Normal lhs = poisson(ia->second, ib->second);
    Normal rhs = expr::subst(r.rhs, realization.components);
    expr::NumericOptions opts = numeric;
    opts.tag = numeric.tag + "/" + relation_text(r.a, r.b, r.rhs);
    if (!opts.prepare) opts.prepare = realization.assign;
    expr::Verdict v = compare(lhs, rhs, opts);

    std::string key = r.tag.empty() ? relation_text(r.a, r.b, r.rhs) : r.tag;
    auto it = by_tag.find(key);
    if (it == by_tag.end()) {
      Entry e;
      e.relation = relation_text(r.a, r.b, r.rhs);
      e.tag = r.tag.empty() ? "-" : r.tag;
      e.mode = expr::to_string(v.mode);
      e.pass = true;
      e.seed = numeric.seed;
      by_tag.emplace(key, report.entries.size());
      report.entries.push_back(e);
      it = by_tag.find(key);
    }
    Entry& e = report.entries[it->second];
    if (e.pass && !v.pass) e.relation = relation_text(r.a, r.b, r.rhs);
    record(e, v);
    ++counts[key];
  }
  for (const auto& [key, idx] : by_tag) {
    int n = counts[key];
    if (n < 2) continue;
    Entry& e = report.entries[idx];
    std::string claim = claim_for_tag(e.tag);
    if (e.pass && !claim.empty()) e.relation = claim;
    e.relation += " [" + std::to_string(n) + " instances]";
  }
  return report;
}

}  // namespace kpa::canonical
