#include "kpa/cli/suites.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <map>
#include <set>
#include <thread>

#include "kpa/bases/derivation.hpp"
#include "kpa/canonical/tags.hpp"
#include "kpa/expr/errors.hpp"
#include "kpa/hopf/coproduct.hpp"

namespace kpa::cli {

using bases::Basis;
using bases::Role;
using canonical::Entry;
using canonical::Report;
using expr::EqualityMode;
using expr::Normal;
using expr::VarId;

namespace {

Entry make_entry(const std::string& relation, const std::string& tag, const std::string& mode, const SuiteConfig& o) {
  Entry e;
  e.relation = relation;
  e.tag = tag.empty() ? "-" : tag;
  e.mode = mode;
  e.pass = true;
  e.seed = o.seed;
  return e;
}

bool momentum_like(const Basis& b) { return b.sector() == bases::SectorKind::Momentum; }

std::string family_tag(const Basis& b, const std::string& momentum_key, const std::string& spacetime_key) {
  if (b.family == "sr") return "-";
  return canonical::tag(momentum_like(b) ? momentum_key : spacetime_key);
}

/// Relation stored for the pair in either order, with the sign to apply.
const canonical::Relation* find_relation(const canonical::RelationTable& t, VarId a, VarId b, int& sign) {
  for (const auto& r : t.relations()) {
    if (r.a == a && r.b == b) {
      sign = 1;
      return &r;
    }
    if (r.a == b && r.b == a) {
      sign = -1;
      return &r;
    }
  }
  return nullptr;
}

/// Groups comparisons by tag the way verify_table does.
class Grouper {
 public:
  Grouper(Report& report, const SuiteConfig& opts, std::string suffix)
      : report_(report), opts_(opts), suffix_(std::move(suffix)) {}

  Entry& entry(const std::string& tag, const std::string& relation) {
    const std::string k = tag.empty() ? relation : tag;
    auto it = index_.find(k);
    if (it == index_.end()) {
      index_.emplace(k, report_.entries.size());
      report_.entries.push_back(make_entry(relation, tag, "exact", opts_));
      it = index_.find(k);
    }
    ++counts_[k];
    return report_.entries[it->second];
  }

  void finish(const std::string& unit = "instances") {
    for (const auto& [k, idx] : index_) {
      Entry& e = report_.entries[idx];
      const int n = counts_[k];
      if (n >= 2) {
        const std::string claim = canonical::claim_for_tag(e.tag);
        if (e.pass && !claim.empty()) e.relation = claim;
        e.relation += suffix_ + " [" + std::to_string(n) + " " + unit + "]";
      } else {
        e.relation += suffix_;
      }
    }
  }

 private:
  Report& report_;
  const SuiteConfig& opts_;
  std::string suffix_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, int> counts_;
};

Report table_suite(const BasisConfig& cfg, const SuiteConfig& opts, const canonical::RelationTable& t,
                   const std::string& tag) {
  if (t.empty()) return {};
  return canonical::verify_table(cfg.basis.realization(), t, comparator(opts, cfg.basis), numeric_options(opts, tag));
}

// Boosts on coordinates of the bicrossproduct basis, computed from the
// coordinate form of the boosts with the phase-space brackets alone.
Report boost_from_table(const BasisConfig& cfg, const SuiteConfig& opts, const canonical::RelationTable& relations) {
  const Basis& b = cfg.basis;
  Report report;
  canonical::AbstractAlgebra alg;
  alg.table = bases::claimed_tables(b).phase;
  for (int mu = 0; mu <= 3; ++mu) alg.commuting.insert(b.get(Role::Momentum, mu).id());
  for (const auto* p : {"kappa", "m"}) alg.parameters.push_back(expr::symbol_id(p));

  auto X = [&](int mu) { return b.get(Role::Coordinate, mu).symbol(); };
  auto P = [&](int mu) { return b.get(Role::Momentum, mu).symbol(); };
  const Normal kappa = Normal::symbol("kappa");
  const Normal PP = P(1) * P(1) + P(2) * P(2) + P(3) * P(3);
  const Normal damp = Normal(1) - expr::exp(Normal(-2) * P(0) / kappa);
  std::map<VarId, Normal> defs;
  for (int i = 1; i <= 3; ++i) {
    const int j = i % 3 + 1;
    const int k = j % 3 + 1;
    defs[b.get(Role::Rotation, i).id()] = X(j) * P(k) - X(k) * P(j);
    defs[b.get(Role::Boost, i).id()] =
        kappa * Normal(expr::Rational(1, 2)) * X(i) * damp + X(i) * PP / (Normal(2) * kappa) - X(0) * P(i);
  }
  auto expand = [&](const Normal& e) { return expr::subst(e, defs); };

  const canonical::Realization real = b.realization();
  const canonical::Comparator cmp = comparator(opts, b);
  Grouper group(report, opts, " (table engine)");
  for (const auto& r : relations.relations()) {
    const Normal lhs = canonical::table_bracket(alg, expand(Normal::var(r.a)), expand(Normal::var(r.b)));
    const Normal rhs = expand(r.rhs);
    expr::NumericOptions num = numeric_options(opts, "boost-table/" + canonical::relation_text(r.a, r.b, r.rhs));
    num.prepare = real.assign;
    Entry& e = group.entry(r.tag, canonical::relation_text(r.a, r.b, r.rhs));
    if (e.pass) e.relation = canonical::relation_text(r.a, r.b, r.rhs);
    canonical::record(e, cmp(lhs, rhs, num));
  }
  group.finish();
  for (auto& e : report.entries)
    if (e.note.empty()) e.note = "derived from " + canonical::tag("dsr1.boosts") + " and the phase-space brackets";
  return report;
}

Report boost_suite(const BasisConfig& cfg, const SuiteConfig& opts) {
  const Basis& b = cfg.basis;
  const canonical::RelationTable boost = bases::claimed_tables(b).boost;
  if (b.family != "dsr1") return table_suite(cfg, opts, boost, "boost-action");

  const std::set<std::string> engine_tags{canonical::tag("dsr1.boost.time"), canonical::tag("dsr1.boost.space")};
  canonical::RelationTable direct(boost.name());
  canonical::RelationTable derived(boost.name());
  for (const auto& r : boost.relations()) {
    (engine_tags.count(r.tag) ? derived : direct).add(r.a, r.b, r.rhs, r.tag);
  }
  Report report = table_suite(cfg, opts, direct, "boost-action");
  report.append(boost_from_table(cfg, opts, derived));
  Report cross = table_suite(cfg, opts, derived, "boost-action/poisson");
  for (auto& e : cross.entries) e.note = "poisson engine cross-check";
  report.append(cross);
  return report;
}

bool resolvable(const canonical::AbstractAlgebra& alg, const std::vector<VarId>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (alg.table.lookup(gens[i], gens[j])) continue;
      if (alg.commuting.count(gens[i]) && alg.commuting.count(gens[j])) continue;
      return false;
    }
  return true;
}

void jacobi_entry(Report& report, const SuiteConfig& opts, const Basis& b, const canonical::Bracket& bracket,
                  const std::vector<std::pair<std::string, Normal>>& gens, const std::string& label,
                  const std::string& tag) {
  Entry e = make_entry("", tag, "exact", opts);
  const canonical::Comparator cmp = comparator(opts, b);
  const canonical::Realization real = b.realization();
  int triples = 0;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      for (std::size_t k = j + 1; k < gens.size(); ++k) {
        const std::string names = gens[i].first + ", " + gens[j].first + ", " + gens[k].first;
        const Normal jac = canonical::jacobiator(bracket, gens[i].second, gens[j].second, gens[k].second);
        expr::NumericOptions num = numeric_options(opts, "jacobi/" + label + "/" + names);
        num.prepare = real.assign;
        const bool was = e.pass;
        canonical::record(e, cmp(jac, Normal{}, num));
        if (was && !e.pass) e.note = "first failure on (" + names + ")";
        ++triples;
      }
  e.relation = "Jacobi identity on " + label + " [" + std::to_string(triples) + " triples]";
  report.entries.push_back(e);
}

Report jacobi_suite(const BasisConfig& cfg, const SuiteConfig& opts) {
  const Basis& b = cfg.basis;
  Report report;
  const Role deformed = momentum_like(b) ? Role::Momentum : Role::Coordinate;
  std::vector<std::string> sub;
  for (Role r : {Role::Rotation, Role::Boost, deformed})
    for (const auto* g : b.of(r)) sub.push_back(g->name);

  const std::string triple_tag = family_tag(b, "dsr1.triple", "dual.triple");
  const std::string sector = momentum_like(b) ? "P" : "X";
  canonical::AbstractAlgebra alg = claimed_algebra(b, sub);
  std::vector<std::pair<std::string, Normal>> gens;
  for (const auto& n : sub) gens.emplace_back(n, Normal::symbol(n));
  jacobi_entry(report, opts, b, canonical::table_engine(alg), gens, "{M, N, " + sector + "} (table engine)", triple_tag);

  canonical::AbstractAlgebra full = claimed_algebra(b);
  std::vector<VarId> ids;
  std::vector<std::pair<std::string, Normal>> all;
  for (const auto& g : b.generators) {
    ids.push_back(g.id());
    all.emplace_back(g.name, g.symbol());
  }
  if (all.size() > gens.size() && resolvable(full, ids))
    jacobi_entry(report, opts, b, canonical::table_engine(full), all, "all generators (table engine)", "-");

  std::vector<std::pair<std::string, Normal>> realized;
  for (const auto& g : b.generators) realized.emplace_back(g.name, g.realization);
  jacobi_entry(report, opts, b, canonical::poisson_engine(), realized, "realized generators (poisson engine)", "-");
  return report;
}

Report constraint_suite(const BasisConfig& cfg, const SuiteConfig& opts) {
  const Basis& b = cfg.basis;
  Report report;
  const bases::DeformationTriple t = bases::effective_triple(b);
  const std::string ctag = family_tag(b, "dsr1.constraint", "dual.constraint");
  const std::string claim = canonical::claim_for_tag(canonical::tag(momentum_like(b) ? "dsr1.constraint" : "dual.constraint"));
  Entry c = make_entry(claim, ctag, "exact", opts);
  const bases::ConstraintCheck check = bases::check_deformation_constraint(t, numeric_options(opts, "constraint"));
  canonical::record(c, check.verdict);
  c.note = "value: " + check.value.str();
  report.entries.push_back(c);

  if (b.functions) {
    const std::string dtag = family_tag(b, "dsr1.abd", "dual.abd");
    Entry d = make_entry("A, B, D derived from the defining functions match the basis triple", dtag, "exact", opts);
    const expr::NumericOptions num = numeric_options(opts, "constraint/derived");
    const EqualityMode first = opts.mode.value_or(EqualityMode::Exact);
    bases::TripleComparison tc = bases::compare_triples(*b.functions, t, first, num);
    if (!tc.pass() && !opts.mode && b.shell) {
      bases::TripleComparison shell = bases::compare_triples(*b.functions, t, EqualityMode::Shell, num);
      if (shell.pass()) {
        for (const auto* v : {&tc.A, &tc.B, &tc.D})
          if (!v->pass) {
            d.note = "fails off shell";
            if (v->evidence.worst) d.note += "; counterexample at " + expr::point_text(*v->evidence.worst);
            break;
          }
        tc = shell;
      }
    }
    for (const auto* v : {&tc.A, &tc.B, &tc.D}) canonical::record(d, *v);
    report.entries.push_back(d);
  }
  return report;
}

Report inverses_suite(const BasisConfig& cfg, const SuiteConfig& opts) {
  const Basis& b = cfg.basis;
  if (!b.functions) return {};
  const std::string tag = family_tag(b, "dsr1.functions", "dual.functions");
  Entry e = make_entry(momentum_like(b) ? "F(f, psq g^2) = p0, G(f, psq g^2) g = 1"
                                        : "F(f, xsq g^2) = x0, G(f, xsq g^2) g = 1",
                       tag, "exact", opts);
  const expr::NumericOptions num = numeric_options(opts, "inverses");
  expr::Verdict v = bases::check_inverses(*b.functions, opts.mode.value_or(EqualityMode::Exact), num);
  if (!v.pass && !opts.mode && b.shell) {
    expr::Verdict s = bases::check_inverses(*b.functions, EqualityMode::Shell, num);
    if (s.pass) {
      e.note = "fails off shell";
      if (v.evidence.worst) e.note += "; counterexample at " + expr::point_text(*v.evidence.worst);
      v = s;
    }
  }
  canonical::record(e, v);
  Report r;
  r.entries.push_back(e);
  return r;
}

struct CoalgebraSet {
  std::optional<hopf::Coproduct> momenta;
  std::optional<hopf::Coproduct> coordinates;
  std::string momenta_tag = "-";
  std::string coordinates_tag = "-";
};

CoalgebraSet coalgebras_for(const BasisConfig& cfg) {
  CoalgebraSet s;
  const std::string& f = cfg.basis.family;
  if (f == "sr" && cfg.coalgebras.empty()) {
    s.momenta = hopf::builtin_coproduct("primitive");
    s.coordinates = hopf::builtin_coproduct("primitive-spacetime");
  } else if (f == "dsr1" && cfg.coalgebras.empty()) {
    s.momenta = hopf::builtin_coproduct("dsr1-momentum");
    s.coordinates = hopf::builtin_coproduct("dsr1-spacetime");
    s.momenta_tag = canonical::tag("dsr1.coproduct.momentum");
    s.coordinates_tag = canonical::tag("dsr1.coproduct.space");
  } else if (f == "dual" && cfg.coalgebras.empty()) {
    s.momenta = hopf::builtin_coproduct("dual-momentum");
    s.coordinates = hopf::builtin_coproduct("dual-spacetime");
    s.momenta_tag = canonical::tag("dual.coproduct.momentum");
    s.coordinates_tag = canonical::tag("dual.coproduct.space");
  } else {
    for (const auto& c : cfg.coalgebras) {
      auto& slot = c.sector == hopf::Sector::Momenta ? s.momenta : s.coordinates;
      if (!slot) slot = c;
    }
  }
  return s;
}

void record_hopf(Entry& e, const hopf::HopfCheck& h) {
  if (h.pass) return;
  if (e.pass) {
    e.residual = h.residual.str();
    e.note = h.generator.empty() ? h.detail : h.generator + ": " + h.detail;
  }
  e.pass = false;
}

canonical::RelationTable restrict(const canonical::RelationTable& t, const std::vector<std::string>& names) {
  std::set<VarId> ids;
  for (const auto& n : names) ids.insert(expr::symbol_id(n));
  canonical::RelationTable out(t.name());
  for (VarId g : ids) out.declare(g);
  for (const auto& r : t.relations())
    if (ids.count(r.a) && ids.count(r.b)) out.add(r.a, r.b, r.rhs, r.tag);
  return out;
}

// Relations produced by the Hopf side, compared with the claimed table.
void compare_with_claims(Report& report, const SuiteConfig& opts, const canonical::RelationTable& produced,
                         const canonical::RelationTable& claimed, const std::string& suffix) {
  Grouper group(report, opts, suffix);
  for (const auto& r : produced.relations()) {
    int sign = 1;
    const canonical::Relation* c = find_relation(claimed, r.a, r.b, sign);
    const std::string text = canonical::relation_text(r.a, r.b, r.rhs);
    Entry& e = group.entry(c ? c->tag : std::string{}, text);
    const Normal expected = c ? (sign > 0 ? c->rhs : -c->rhs) : Normal{};
    const Normal residual = r.rhs - expected;
    if (!residual.is_zero() && e.pass) {
      e.pass = false;
      e.relation = text;
      e.residual = residual.str();
      e.note = c ? "claimed " + canonical::relation_text(r.a, r.b, expected) : "no claimed relation for this pair";
    }
  }
  group.finish();
}

struct DualityImage {
  int relations = 0;
  int mismatches = 0;
  std::string first;  // first mismatching relation
  Normal residual;
};

// Maps every kappa-basis relation into the dual generators and compares with
// the dual tables. Momenta go to dual coordinates with a sign flip.
DualityImage map_kappa_tables(const canonical::RelationTable& dual, int momentum_sign, const Normal& kappa_image) {
  const Basis kb = bases::builtin_basis("dsr1");
  const bases::ClaimedTables kt = bases::claimed_tables(kb);
  std::map<VarId, std::pair<int, VarId>> rename;
  std::map<VarId, Normal> values;
  auto add = [&](Role from, Role to, int idx, int sign) {
    const VarId a = kb.get(from, idx).id();
    const VarId b = expr::symbol_id(bases::generator_name("dual", to, idx));
    rename[a] = {sign, b};
    values[a] = Normal(sign) * Normal::var(b);
  };
  for (int i = 1; i <= 3; ++i) {
    add(Role::Rotation, Role::Rotation, i, 1);
    add(Role::Boost, Role::Boost, i, 1);
  }
  for (int mu = 0; mu <= 3; ++mu) {
    add(Role::Coordinate, Role::Momentum, mu, 1);
    add(Role::Momentum, Role::Coordinate, mu, momentum_sign);
  }
  values[expr::symbol_id("kappa")] = kappa_image;

  DualityImage out;
  for (const auto* part : {&kt.lorentz, &kt.rotation, &kt.boost, &kt.phase})
    for (const auto& r : part->relations()) {
      const auto [sa, a] = rename.at(r.a);
      const auto [sb, b] = rename.at(r.b);
      const Normal image = expr::subst(r.rhs, values) * Normal(sa * sb);
      const auto claimed = dual.lookup(a, b);
      const Normal residual = claimed ? image - *claimed : image;
      ++out.relations;
      if (claimed && residual.is_zero()) continue;
      if (out.mismatches++ == 0) {
        out.first = canonical::relation_text(a, b, image);
        out.residual = residual;
      }
    }
  return out;
}

Report duality_check(const BasisConfig& cfg, const SuiteConfig& opts) {
  if (cfg.basis.family != "dual") return {};
  const canonical::RelationTable dual = claimed_algebra(cfg.basis).table;
  const Normal kb = Normal::symbol("kappabar");
  const DualityImage signed_map = map_kappa_tables(dual, -1, -kb.inverse());
  const DualityImage literal = map_kappa_tables(dual, 1, kb.inverse());
  Entry e = make_entry("dual tables = kappa tables under X -> Pbar, P -> -Xbar, kappa -> -1/kappabar [" +
                           std::to_string(signed_map.relations) + " relations]",
                       "-", "exact", opts);
  e.pass = signed_map.mismatches == 0;
  if (!e.pass) {
    e.residual = signed_map.residual.str();
    e.note = "first mismatch: " + signed_map.first;
  } else {
    e.note = "the literal swap X <-> P, kappa -> 1/kappabar leaves " + std::to_string(literal.mismatches) + " of " +
             std::to_string(literal.relations) + " relations mismatched";
  }
  Report r;
  r.entries.push_back(e);
  return r;
}

Report coalgebra_suite(const BasisConfig& cfg, const SuiteConfig& opts) {
  const Basis& b = cfg.basis;
  Report report;
  const CoalgebraSet set = coalgebras_for(cfg);
  const canonical::AbstractAlgebra claimed = claimed_algebra(b);

  for (const auto* pc : {&set.momenta, &set.coordinates}) {
    if (!*pc) continue;
    const hopf::Coproduct& c = **pc;
    const std::string& tag = pc == &set.momenta ? set.momenta_tag : set.coordinates_tag;
    std::string gens;
    for (const auto& g : c.generators) gens += (gens.empty() ? "" : ", ") + g;
    Entry co = make_entry("Delta on {" + gens + "} is coassociative with counit", tag, "exact", opts);
    record_hopf(co, hopf::check_coassociativity(c));
    record_hopf(co, hopf::check_counit(c));
    report.entries.push_back(co);

    Entry hom = make_entry("Delta on {" + gens + "} respects their brackets", tag, "exact", opts);
    record_hopf(hom, hopf::check_homomorphism(c, restrict(claimed.table, c.generators)));
    report.entries.push_back(hom);

    try {
      hopf::twist_parameter(c);
    } catch (const hopf::HopfError&) {
      continue;
    }
    compare_with_claims(report, opts, hopf::dualize_twist(c), claimed.table, " (dual of the cobracket)");
  }

  if (set.momenta && set.coordinates) {
    const canonical::RelationTable cross = hopf::heisenberg_cross(*set.momenta, *set.coordinates);
    compare_with_claims(report, opts, cross, claimed.table, " (Heisenberg double)");

    Entry eng = make_entry("Heisenberg double agrees with the poisson engine", "-", "exact", opts);
    const canonical::Realization real = b.realization();
    const canonical::Comparator cmp = comparator(opts, b);
    int n = 0;
    for (const auto& r : cross.relations()) {
      auto ia = real.components.find(r.a);
      auto ib = real.components.find(r.b);
      if (ia == real.components.end() || ib == real.components.end()) continue;
      const std::string text = canonical::relation_text(r.a, r.b, r.rhs);
      expr::NumericOptions num = numeric_options(opts, "coalgebra/engine/" + text);
      num.prepare = real.assign;
      const bool was = eng.pass;
      canonical::record(eng, cmp(canonical::poisson(ia->second, ib->second), expr::subst(r.rhs, real.components), num));
      if (was && !eng.pass) eng.note = "first failure on " + text;
      ++n;
    }
    eng.relation += " [" + std::to_string(n) + " relations]";
    if (n > 0) report.entries.push_back(eng);
  }

  if (b.family != "sr") {
    const hopf::Coproduct bad = hopf::builtin_coproduct("corrupted");
    const hopf::HopfCheck h = hopf::check_coassociativity(bad);
    Entry ctl = make_entry("negative control: twist exp(-P0^2/kappa^2) is rejected as not coassociative", "-",
                           "control", opts);
    ctl.pass = !h.pass;
    ctl.residual = h.residual.str();
    ctl.note = h.pass ? "corrupted coproduct was accepted" : "rejected at " + h.generator;
    report.entries.push_back(ctl);
  }
  return report;
}

}  // namespace

expr::NumericOptions numeric_options(const SuiteConfig& opts, const std::string& tag) {
  expr::NumericOptions o;
  o.seed = opts.seed;
  o.tag = tag;
  o.points = opts.samples;
  o.tolerance = static_cast<expr::Real>(opts.tolerance);
  return o;
}

canonical::Comparator comparator(const SuiteConfig& opts, const bases::Basis& b) {
  if (opts.mode) {
    const EqualityMode mode = *opts.mode;
    return [mode](const Normal& l, const Normal& r, const expr::NumericOptions& o) { return expr::equal(l, r, mode, o); };
  }
  const bool shell = b.shell;
  return [shell](const Normal& l, const Normal& r, const expr::NumericOptions& o) {
    expr::Verdict v = expr::equal(l, r, EqualityMode::Exact, o);
    if (v.pass || !shell) return v;
    expr::Verdict s = expr::equal(l, r, EqualityMode::Shell, o);
    if (!s.pass) return v;
    s.note = "fails off shell";
    if (v.evidence.worst) s.note += "; counterexample at " + expr::point_text(*v.evidence.worst);
    return s;
  };
}

canonical::AbstractAlgebra claimed_algebra(const bases::Basis& b, const std::vector<std::string>& only) {
  const bases::ClaimedTables t = bases::claimed_tables(b);
  canonical::RelationTable merged("claimed");
  for (const auto* part : {&t.lorentz, &t.rotation, &t.boost, &t.phase}) merged.merge(*part);
  canonical::AbstractAlgebra alg;
  const Role deformed = momentum_like(b) ? Role::Momentum : Role::Coordinate;
  std::vector<std::string> names = only;
  if (names.empty())
    for (const auto& g : b.generators) names.push_back(g.name);
  alg.table = restrict(merged, names);
  for (const auto* g : b.of(deformed)) alg.commuting.insert(g->id());
  for (const auto* p : {"kappa", "kappabar", "m"}) alg.parameters.push_back(expr::symbol_id(p));
  return alg;
}

Report run_suite(const std::string& suite, const BasisConfig& cfg, const SuiteConfig& opts) {
  const Basis& b = cfg.basis;
  Report r;
  if (suite == "lorentz") {
    r = table_suite(cfg, opts, bases::claimed_tables(b).lorentz, suite);
  } else if (suite == "rotation-action") {
    r = table_suite(cfg, opts, bases::claimed_tables(b).rotation, suite);
  } else if (suite == "boost-action") {
    r = boost_suite(cfg, opts);
  } else if (suite == "phase-space") {
    r = table_suite(cfg, opts, bases::claimed_tables(b).phase, suite);
    r.append(duality_check(cfg, opts));
  } else if (suite == "jacobi") {
    r = jacobi_suite(cfg, opts);
  } else if (suite == "constraint") {
    r = constraint_suite(cfg, opts);
  } else if (suite == "inverses") {
    r = inverses_suite(cfg, opts);
  } else if (suite == "onshell") {
    r = bases::onshell_identity_suite(b, numeric_options(opts, suite), opts.mode);
  } else if (suite == "limits") {
    r = bases::poincare_limit(b, opts.order);
  } else if (suite == "coalgebra") {
    r = coalgebra_suite(cfg, opts);
  } else {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  for (auto& e : r.entries) {
    e.suite = suite;
    e.seed = opts.seed;
  }
  return r;
}

Report run_suites(const BasisConfig& cfg, const SuiteConfig& opts) {
  const std::vector<std::string>& suites = opts.suites;
  std::vector<Report> results(suites.size());
  std::vector<std::exception_ptr> errors(suites.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < suites.size(); i = next++) {
      try {
        results[i] = run_suite(suites[i], cfg, opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, opts.jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(n, suites.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  Report all;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    all.append(results[i]);
  }
  return all;
}

}  // namespace kpa::cli
