#include "kpa/bases/derivation.hpp"

#include <algorithm>
#include <cstdio>

#include "kpa/canonical/tags.hpp"
#include "kpa/expr/errors.hpp"
#include "kpa/expr/eval.hpp"
#include "kpa/expr/expr.hpp"
#include "kpa/expr/series.hpp"

namespace kpa::bases {

using canonical::Entry;
using canonical::Report;
using canonical::tag;
using expr::EqualityMode;
using expr::expand_sugar;

namespace {

Normal sym(const std::string& s) { return Normal::symbol(s); }

std::map<VarId, Normal> to_deformed(const DefiningFunctions& df) {
  const Arguments& a = arguments(df.kind);
  return {{a.sr_first, df.F}, {a.sr_vec, Normal::var(a.deformed_vec) * df.G.pow(2)}};
}

Entry make_entry(const std::string& suite, const std::string& relation, const std::string& t, EqualityMode mode,
                 std::uint64_t seed) {
  Entry e;
  e.suite = suite;
  e.relation = relation;
  e.tag = t;
  e.mode = expr::to_string(mode);
  e.pass = true;
  e.on_shell = mode == EqualityMode::Shell;
  e.seed = seed;
  return e;
}

// Shell-mode comparison that also records why exact mode is not enough.
void record_shell(Entry& e, const Normal& lhs, const Normal& rhs, const expr::NumericOptions& numeric) {
  canonical::record(e, expr::equal(lhs, rhs, EqualityMode::Shell, numeric));
  expr::Verdict off = expr::equal(lhs, rhs, EqualityMode::Exact, numeric);
  if (!off.pass && e.note.empty()) {
    e.note = "fails off shell";
    if (off.evidence.worst) e.note += "; counterexample at " + expr::point_text(*off.evidence.worst);
  }
}

Normal sr_counterpart(Role role, int i) {
  auto s = [](const std::string& n, int k) { return sym(n + std::to_string(k)); };
  if (role == Role::Momentum) return s("p", i);
  if (role == Role::Coordinate) return s("x", i);
  int j = i % 3 + 1;
  int k = j % 3 + 1;
  if (role == Role::Rotation) return s("x", j) * s("p", k) - s("x", k) * s("p", j);
  return s("x", i) * sym("p0") - sym("x0") * s("p", i);
}

std::optional<Rational> limit_center(const std::string& parameter) {
  if (parameter == "kappa") return std::nullopt;
  return Rational(0);
}

std::string limit_tag(const std::string& parameter) {
  return tag(parameter == "kappa" ? "limit.kappa" : "limit.kappabar");
}

std::string limit_text(const std::string& parameter) {
  return parameter == "kappa" ? "kappa -> infinity" : parameter + " -> 0";
}

}  // namespace

DeformationTriple derive_abd(const DefiningFunctions& df) {
  const Arguments& a = arguments(df.kind);
  const Normal first = Normal::var(a.sr_first);
  const Normal two(2);
  Normal A = first * df.g;
  Normal B = two * first * diff(df.g, a.sr_vec) + diff(df.g, a.sr_first);
  Normal D = two * first * diff(df.f, a.sr_vec) + diff(df.f, a.sr_first);
  const auto to = to_deformed(df);
  DeformationTriple t;
  t.kind = df.kind;
  t.A = subst(A, to);
  t.B = df.G.pow(2) * subst(B, to);
  t.D = df.G * subst(D, to);
  return t;
}

DeformationTriple derive_abd_sr(const DefiningFunctions& df) {
  const Arguments& a = arguments(df.kind);
  const Normal first = Normal::var(a.sr_first);
  const Normal two(2);
  const Normal G = pull_back(df, df.G);
  DeformationTriple t;
  t.kind = df.kind;
  t.A = first * df.g;
  t.B = G.pow(2) * (two * first * diff(df.g, a.sr_vec) + diff(df.g, a.sr_first));
  t.D = G * (two * first * diff(df.f, a.sr_vec) + diff(df.f, a.sr_first));
  return t;
}

TripleComparison compare_triples(const DefiningFunctions& df, const DeformationTriple& claimed, EqualityMode mode,
                                 const expr::NumericOptions& numeric) {
  const DeformationTriple d = derive_abd_sr(df);
  auto one = [&](const Normal& derived, const Normal& claim, const char* which) {
    expr::NumericOptions o = numeric;
    o.tag = numeric.tag + "/" + which;
    return expr::equal(derived, pull_back(df, claim), mode, o);
  };
  return TripleComparison{one(d.A, claimed.A, "A"), one(d.B, claimed.B, "B"), one(d.D, claimed.D, "D")};
}

Normal constraint_value(const DeformationTriple& t) {
  const Arguments& a = arguments(t.kind);
  const Normal vec = Normal::var(a.deformed_vec);
  return diff(t.A, a.deformed_first) * t.D + Normal(2) * diff(t.A, a.deformed_vec) * (t.A + vec * t.B) - t.A * t.B;
}

std::function<void(expr::PhasePoint&)> deformed_prepare(SectorKind kind, const DefiningFunctions* df) {
  const Arguments& a = arguments(kind);
  const std::string first = expr::var_info(a.deformed_first).key;
  const std::string vec = expr::var_info(a.deformed_vec).key;
  if (df) {
    expr::Expr f = expr::from_normal(expand_sugar(df->f));
    expr::Expr v = expr::from_normal(expand_sugar(Normal::var(a.sr_vec) * df->g.pow(2)));
    return [first, vec, f, v](expr::PhasePoint& pt) {
      pt.set(first, expr::eval(f, pt));
      pt.set(vec, expr::eval(v, pt));
    };
  }
  const std::string sr_first = expr::var_info(a.sr_first).key;
  const std::string sr_vec = expr::var_info(a.sr_vec).key;
  return [first, vec, sr_first, sr_vec](expr::PhasePoint& pt) {
    pt.refresh_sugar();
    pt.set(first, pt.at(sr_first));
    pt.set(vec, pt.at(sr_vec));
  };
}

ConstraintCheck check_deformation_constraint(const DeformationTriple& t, const expr::NumericOptions& numeric) {
  ConstraintCheck c;
  c.value = constraint_value(t);
  expr::NumericOptions opts = numeric;
  if (!opts.prepare) opts.prepare = deformed_prepare(t.kind, nullptr);
  c.verdict = expr::equal(c.value, Normal(1), EqualityMode::Exact, opts);
  return c;
}

expr::Verdict check_inverses(const DefiningFunctions& df, EqualityMode mode, const expr::NumericOptions& numeric) {
  const Arguments& a = arguments(df.kind);
  expr::NumericOptions opts = numeric;
  opts.tag = numeric.tag + "/inverse-first";
  expr::Verdict first = expr::equal(pull_back(df, df.F), Normal::var(a.sr_first), mode, opts);
  opts.tag = numeric.tag + "/inverse-scale";
  expr::Verdict scale = expr::equal(pull_back(df, df.G) * df.g, Normal(1), mode, opts);
  expr::Verdict& worse = first.pass ? scale : first;
  expr::Verdict out = worse;
  out.pass = first.pass && scale.pass;
  out.numeric_only = first.numeric_only || scale.numeric_only;
  out.evidence.points = first.evidence.points + scale.evidence.points;
  out.evidence.pass = first.evidence.pass && scale.evidence.pass;
  return out;
}

Report onshell_identity_suite(const Basis& b, const expr::NumericOptions& numeric,
                              std::optional<EqualityMode> mode) {
  Report r;
  const EqualityMode exact = mode.value_or(EqualityMode::Exact);
  const std::uint64_t seed = numeric.seed;
  auto opts_for = [&](const std::string& what) {
    expr::NumericOptions o = numeric;
    o.tag = "onshell/" + b.name + "/" + what;
    return o;
  };
  auto rotation_from_vectors = [&](int i) {
    int j = i % 3 + 1;
    int k = j % 3 + 1;
    const Normal& Xj = b.get(Role::Coordinate, j).realization;
    const Normal& Xk = b.get(Role::Coordinate, k).realization;
    const Normal& Pj = b.get(Role::Momentum, j).realization;
    const Normal& Pk = b.get(Role::Momentum, k).realization;
    return Xj * Pk - Xk * Pj;
  };

  if (b.family == "dsr1") {
    Entry boosts =
        make_entry("onshell", "N_i (X, P form) = n_i", tag("dsr1.boosts"), mode.value_or(EqualityMode::Shell), seed);
    for (int i = 1; i <= 3; ++i) {
      const Normal& lhs = b.get(Role::Boost, i).realization;
      const auto o = opts_for("N" + std::to_string(i));
      if (mode) canonical::record(boosts, expr::equal(lhs, sr_counterpart(Role::Boost, i), *mode, o));
      else record_shell(boosts, lhs, sr_counterpart(Role::Boost, i), o);
    }
    boosts.relation += " [3 instances]";
    r.entries.push_back(boosts);

    Entry rot = make_entry("onshell", "M_i = eps_ijk X_j P_k = m_i", tag("dsr1.rotations"), exact, seed);
    for (int i = 1; i <= 3; ++i)
      canonical::record(rot, expr::equal(rotation_from_vectors(i), sr_counterpart(Role::Rotation, i),
                                         exact, opts_for("M" + std::to_string(i))));
    rot.relation += " [3 instances]";
    r.entries.push_back(rot);
    return r;
  }

  if (b.family == "dual") {
    Entry rot =
        make_entry("onshell", "Mbar_i = eps_ijk Xbar_j Pbar_k = m_i", tag("dual.rotations"), exact, seed);
    for (int i = 1; i <= 3; ++i)
      canonical::record(rot, expr::equal(rotation_from_vectors(i), sr_counterpart(Role::Rotation, i),
                                         exact, opts_for("M" + std::to_string(i))));
    rot.relation += " [3 instances]";
    r.entries.push_back(rot);

    // The inverse map in the deformed variables, with the realizations
    // substituted in sugar form (W over xsq) to keep intermediate sizes small.
    const DefiningFunctions& df = *b.functions;
    const Normal kb = sym("kappabar");
    const Normal x0 = sym("x0");
    const Normal p0 = sym("p0");
    const Normal W = df.g.inverse() - kb * x0;
    const Normal X0 = sym("X0bar");
    const Normal XX = sym("Xsqbar");
    const Normal C = expr::cosh(kb * X0) - kb.pow(2) / Normal(2) * XX * expr::exp(kb * X0);
    std::map<VarId, Normal> comps{{expr::symbol_id("X0bar"), df.f},
                                  {expr::symbol_id("Xsqbar"), sym("xsq") * df.g.pow(2)},
                                  {expr::symbol_id("P0bar"), p0 * W}};
    std::vector<Normal> inverse{sym("P0bar") / C};
    for (int i = 1; i <= 3; ++i) {
      const std::string n = std::to_string(i);
      const Normal xi = sym("x" + n);
      const Normal pi = sym("p" + n);
      comps.emplace(expr::symbol_id("X" + n + "bar"), xi * df.g);
      comps.emplace(expr::symbol_id("P" + n + "bar"), pi * W - kb * (xi * p0 - x0 * pi));
      inverse.push_back(expr::exp(-kb * X0) * sym("P" + n + "bar") + kb * sym("X" + n + "bar") * sym("P0bar") / C);
    }
    Entry round = make_entry("onshell", "p_mu(Xbar(x, p), Pbar(x, p)) = p_mu", tag("dual.momenta.inverse"),
                             exact, seed);
    for (int mu = 0; mu <= 3; ++mu)
      canonical::record(round, expr::equal(subst(inverse[static_cast<std::size_t>(mu)], comps),
                                           sr_counterpart(Role::Momentum, mu), exact,
                                           opts_for("p" + std::to_string(mu))));
    round.relation += " [4 instances]";
    r.entries.push_back(round);
  }
  return r;
}

Report poincare_limit(const DeformationTriple& t, const std::string& parameter, int order) {
  Report r;
  if (parameter.empty()) {
    Entry e = make_entry("limits", "undeformed basis: limit is the identity", "-", EqualityMode::Exact, 0);
    e.mode = "structural";
    r.entries.push_back(e);
    return r;
  }
  const Arguments& a = arguments(t.kind);
  const auto center = limit_center(parameter);
  const int n = std::max(order, 0);
  struct Item {
    const char* name;
    const Normal* value;
    Normal expected;
  };
  const Item items[] = {{"A", &t.A, Normal::var(a.deformed_first)}, {"B", &t.B, Normal{}}, {"D", &t.D, Normal(1)}};
  for (const auto& it : items) {
    Entry e = make_entry("limits", std::string(it.name) + " -> " + it.expected.str() + " as " + limit_text(parameter),
                         limit_tag(parameter), EqualityMode::Exact, 0);
    e.mode = "series";
    try {
      expr::SeriesPoly s = expr::series(*it.value, parameter, center, n);
      Normal diffc = s.coefficient(0) - it.expected;
      e.pass = diffc.is_zero();
      e.residual = diffc.str();
      if (std::string(it.name) == "A" && n >= 1) {
        for (int k = 1; k <= n; ++k) {
          if (!e.note.empty()) e.note += "; ";
          e.note += "order " + std::to_string(k) + ": " + s.coefficient(k).str();
        }
      }
    } catch (const PoleError& err) {
      e.pass = false;
      e.residual = "pole";
      e.note = err.what();
    }
    r.entries.push_back(e);
  }
  return r;
}

Report poincare_limit(const Basis& b, int order) {
  Report r = poincare_limit(effective_triple(b), b.parameter, order);
  if (b.parameter.empty()) return r;
  const auto center = limit_center(b.parameter);
  for (Role role : {Role::Rotation, Role::Boost, Role::Momentum, Role::Coordinate}) {
    auto gens = b.of(role);
    if (gens.empty()) continue;
    std::string label = generator_name(b.family, role, 0);
    label = label.substr(0, 1) + (b.family == "dual" ? "bar" : "");
    std::string sr_label = generator_name("sr", role, 0).substr(0, 1);
    Entry e = make_entry("limits", label + " -> " + sr_label + " as " + limit_text(b.parameter) + " [" +
                                       std::to_string(gens.size()) + " instances]",
                         limit_tag(b.parameter), EqualityMode::Exact, 0);
    e.mode = "series";
    for (const auto* g : gens) {
      try {
        expr::SeriesPoly s = expr::series(g->realization, b.parameter, center, 0);
        Normal d = s.coefficient(0) - sr_counterpart(role, g->index);
        if (!d.is_zero() && e.pass) {
          e.pass = false;
          e.residual = d.str();
          e.note = g->name;
        }
      } catch (const PoleError& err) {
        e.pass = false;
        e.residual = "pole";
        e.note = g->name + ": " + err.what();
      }
    }
    r.entries.push_back(e);
  }
  return r;
}

}  // namespace kpa::bases
