#include "kpa/bases/basis.hpp"

#include "kpa/bases/derivation.hpp"
#include "kpa/canonical/bracket.hpp"
#include "kpa/canonical/tags.hpp"
#include "kpa/expr/errors.hpp"
#include "kpa/expr/eval.hpp"
#include "kpa/expr/expr.hpp"

namespace kpa::bases {

using canonical::tag;
using expr::expand_sugar;

namespace {

Normal sym(const std::string& s) { return Normal::symbol(s); }
Normal half() { return Normal(Rational(1, 2)); }
std::string idx(int i) { return std::to_string(i); }

Normal sr_rotation(int i) {
  int j = i % 3 + 1;
  int k = j % 3 + 1;
  return sym("x" + idx(j)) * sym("p" + idx(k)) - sym("x" + idx(k)) * sym("p" + idx(j));
}

Normal sr_boost(int i) { return sym("x" + idx(i)) * sym("p0") - sym("x0") * sym("p" + idx(i)); }

Normal sum_of_squares(const std::vector<Normal>& v) {
  Normal s;
  for (const auto& x : v) s += x * x;
  return s;
}

void add_generator(Basis& b, Role role, int index, const Normal& realization) {
  b.generators.push_back(Generator{generator_name(b.family, role, index), role, index, realization});
}

}  // namespace

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

const Arguments& arguments(SectorKind kind) {
  static const Arguments momentum{expr::symbol_id("p0"), expr::symbol_id("psq"), expr::symbol_id("P0"),
                                  expr::symbol_id("Psq"), "p"};
  static const Arguments spacetime{expr::symbol_id("x0"), expr::symbol_id("xsq"), expr::symbol_id("X0bar"),
                                   expr::symbol_id("Xsqbar"), "x"};
  return kind == SectorKind::Momentum ? momentum : spacetime;
}

std::string generator_name(const std::string& family, Role role, int index) {
  static const char* upper[] = {"M", "N", "P", "X"};
  static const char* lower[] = {"m", "n", "p", "x"};
  auto r = static_cast<std::size_t>(role);
  if (family == "sr") return lower[r] + idx(index);
  if (family == "dual") return upper[r] + idx(index) + "bar";
  return upper[r] + idx(index);
}

const Generator* Basis::find(Role role, int index) const {
  for (const auto& g : generators)
    if (g.role == role && g.index == index) return &g;
  return nullptr;
}

const Generator& Basis::get(Role role, int index) const {
  const Generator* g = find(role, index);
  if (!g) throw ConfigError("basis " + name + " has no generator " + generator_name(family, role, index));
  return *g;
}

const Generator* Basis::find(const std::string& n) const {
  for (const auto& g : generators)
    if (g.name == n) return &g;
  return nullptr;
}

bool Basis::has(Role role) const { return !of(role).empty(); }

std::vector<const Generator*> Basis::of(Role role) const {
  std::vector<const Generator*> out;
  for (const auto& g : generators)
    if (g.role == role) out.push_back(&g);
  return out;
}

SectorKind Basis::sector() const {
  if (functions) return functions->kind;
  return family == "dual" ? SectorKind::Spacetime : SectorKind::Momentum;
}

canonical::Realization Basis::realization() const {
  canonical::Realization r;
  for (const auto& g : generators) r.components.emplace(g.id(), g.realization);
  std::vector<std::pair<std::string, expr::Expr>> comps;
  for (const auto& g : generators) comps.emplace_back(g.name, expr::from_normal(g.realization));
  // Deformed vector scalar, so expressions in Psq or Xsqbar evaluate too.
  const Arguments& args = arguments(sector());
  const Role vec_role = sector() == SectorKind::Momentum ? Role::Momentum : Role::Coordinate;
  std::vector<Normal> vec;
  for (int i = 1; i <= 3; ++i)
    if (const Generator* g = find(vec_role, i)) vec.push_back(g->realization);
  if (vec.size() == 3) comps.emplace_back(expr::var_info(args.deformed_vec).key, expr::from_normal(sum_of_squares(vec)));
  r.assign = [comps](expr::PhasePoint& pt) {
    for (const auto& [n, e] : comps) pt.set(n, expr::eval(e, pt));
  };
  return r;
}

DefiningFunctions dsr1_functions() {
  Normal kappa = sym("kappa");
  Normal R = sqrt(Normal(1) + sym("m").pow(2) / kappa.pow(2));
  Normal K = sym("p0") / kappa + R;
  Normal P0 = sym("P0");
  DefiningFunctions df;
  df.kind = SectorKind::Momentum;
  df.f = kappa * ln(K);
  df.g = K.inverse();
  df.F = kappa * sinh(P0 / kappa) + sym("Psq") * exp(P0 / kappa) / (Normal(2) * kappa);
  df.G = exp(P0 / kappa);
  return df;
}

DefiningFunctions dual_functions() {
  Normal kb = sym("kappabar");
  Normal x0 = sym("x0");
  Normal W = sqrt(kb.pow(2) * (x0.pow(2) - sym("xsq")) + Normal(1));
  Normal X0 = sym("X0bar");
  DefiningFunctions df;
  df.kind = SectorKind::Spacetime;
  df.f = ln(kb * x0 + W) / kb;
  df.g = (kb * x0 + W).inverse();
  df.F = sinh(kb * X0) / kb + kb * half() * sym("Xsqbar") * exp(kb * X0);
  df.G = exp(kb * X0);
  return df;
}

DeformationTriple dsr1_triple() {
  Normal kappa = sym("kappa");
  Normal P0 = sym("P0");
  DeformationTriple t;
  t.kind = SectorKind::Momentum;
  t.A = kappa * half() * (Normal(1) - exp(Normal(-2) * P0 / kappa)) + sym("Psq") / (Normal(2) * kappa);
  t.B = -kappa.inverse();
  t.D = Normal(1);
  return t;
}

DeformationTriple dual_triple() {
  Normal kb = sym("kappabar");
  Normal X0 = sym("X0bar");
  DeformationTriple t;
  t.kind = SectorKind::Spacetime;
  t.A = (Normal(1) - exp(Normal(-2) * kb * X0)) / (Normal(2) * kb) + kb * half() * sym("Xsqbar");
  t.B = -kb;
  t.D = Normal(1);
  return t;
}

DeformationTriple poincare_triple(SectorKind kind) {
  const Arguments& a = arguments(kind);
  return DeformationTriple{kind, Normal::var(a.deformed_first), Normal{}, Normal(1)};
}

DeformationTriple effective_triple(const Basis& b) {
  if (b.triple_override) return *b.triple_override;
  if (b.family == "dsr1") return dsr1_triple();
  if (b.family == "dual") return dual_triple();
  if (b.functions) return derive_abd(*b.functions);
  return poincare_triple(b.sector());
}

Normal in_generators(const Basis& b, const Normal& e) {
  const SectorKind kind = b.sector();
  const Arguments& a = arguments(kind);
  const Role role = kind == SectorKind::Momentum ? Role::Momentum : Role::Coordinate;
  std::vector<Normal> comps;
  for (int i = 1; i <= 3; ++i) comps.push_back(Normal::symbol(generator_name(b.family, role, i)));
  std::map<VarId, Normal> m{{a.deformed_vec, sum_of_squares(comps)}};
  std::string first = generator_name(b.family, role, 0);
  if (first != expr::var_info(a.deformed_first).key) m.emplace(a.deformed_first, Normal::symbol(first));
  return subst(e, m);
}

Normal pull_back(const DefiningFunctions& df, const Normal& e) {
  const Arguments& a = arguments(df.kind);
  return subst(e, std::map<VarId, Normal>{{a.deformed_first, df.f},
                                          {a.deformed_vec, Normal::var(a.sr_vec) * df.g.pow(2)}});
}

Basis builtin_basis(const std::string& name) {
  Basis b;
  b.name = name;
  b.family = name;
  if (name == "sr") {
    b.functions = DefiningFunctions{SectorKind::Momentum, sym("p0"), Normal(1), sym("P0"), Normal(1)};
    for (int i = 1; i <= 3; ++i) add_generator(b, Role::Rotation, i, sr_rotation(i));
    for (int i = 1; i <= 3; ++i) add_generator(b, Role::Boost, i, sr_boost(i));
    for (int i = 0; i <= 3; ++i) add_generator(b, Role::Momentum, i, sym("p" + idx(i)));
    for (int i = 0; i <= 3; ++i) add_generator(b, Role::Coordinate, i, sym("x" + idx(i)));
    return b;
  }
  if (name == "dsr1") {
    b.functions = dsr1_functions();
    b.shell = true;
    b.parameter = "kappa";
    Normal kappa = sym("kappa");
    Normal K = b.functions->g.inverse();
    std::vector<Normal> X;
    std::vector<Normal> P;
    for (int mu = 0; mu <= 3; ++mu) X.push_back(sym("x" + idx(mu)) * K);
    P.push_back(expand_sugar(b.functions->f));
    for (int i = 1; i <= 3; ++i) P.push_back(sym("p" + idx(i)) * b.functions->g);
    Normal PP = P[1] * P[1] + P[2] * P[2] + P[3] * P[3];
    for (int i = 1; i <= 3; ++i) {
      int j = i % 3 + 1;
      int k = j % 3 + 1;
      add_generator(b, Role::Rotation, i, X[static_cast<std::size_t>(j)] * P[static_cast<std::size_t>(k)] -
                                              X[static_cast<std::size_t>(k)] * P[static_cast<std::size_t>(j)]);
    }
    Normal damp = Normal(1) - exp(Normal(-2) * P[0] / kappa);
    for (int i = 1; i <= 3; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      Normal N = kappa * half() * X[ui] * damp + X[ui] * PP / (Normal(2) * kappa) - X[0] * P[ui];
      add_generator(b, Role::Boost, i, N);
    }
    for (int mu = 0; mu <= 3; ++mu) add_generator(b, Role::Momentum, mu, P[static_cast<std::size_t>(mu)]);
    for (int mu = 0; mu <= 3; ++mu) add_generator(b, Role::Coordinate, mu, X[static_cast<std::size_t>(mu)]);
    return b;
  }
  if (name == "dual") {
    b.functions = dual_functions();
    b.parameter = "kappabar";
    Normal kb = sym("kappabar");
    Normal W = expand_sugar(sqrt(kb.pow(2) * (sym("x0").pow(2) - sym("xsq")) + Normal(1)));
    for (int i = 1; i <= 3; ++i) add_generator(b, Role::Rotation, i, sr_rotation(i));
    for (int i = 1; i <= 3; ++i) add_generator(b, Role::Boost, i, sr_boost(i));
    add_generator(b, Role::Momentum, 0, sym("p0") * W);
    for (int i = 1; i <= 3; ++i) add_generator(b, Role::Momentum, i, sym("p" + idx(i)) * W - kb * sr_boost(i));
    add_generator(b, Role::Coordinate, 0, expand_sugar(b.functions->f));
    Normal g = expand_sugar(b.functions->g);
    for (int i = 1; i <= 3; ++i) add_generator(b, Role::Coordinate, i, sym("x" + idx(i)) * g);
    return b;
  }
  throw ConfigError("unknown basis '" + name + "' (expected sr, dsr1, dual or a config file)");
}

Basis basis_from_functions(const DefiningFunctions& df, const std::string& name, const Overrides& overrides,
                           bool shell, const std::string& naming) {
  expr::Verdict inv = check_inverses(df, shell);
  if (!inv.pass)
    throw ConfigError("defining functions of " + name + " are not mutually inverse; residual " + inv.residual.str());
  Basis b;
  b.name = name;
  b.family = naming.empty() ? (df.kind == SectorKind::Momentum ? "custom" : "dual") : naming;
  b.functions = df;
  b.shell = shell;
  auto pick = [&](Role role, int i, const Normal& fallback) -> std::optional<Normal> {
    auto it = overrides.find(generator_name(b.family, role, i));
    if (it == overrides.end()) it = overrides.find(generator_name("custom", role, i));
    if (it != overrides.end()) return expand_sugar(it->second);
    if (fallback.is_zero()) return std::nullopt;
    return fallback;
  };
  for (int i = 1; i <= 3; ++i) add_generator(b, Role::Rotation, i, *pick(Role::Rotation, i, sr_rotation(i)));
  for (int i = 1; i <= 3; ++i) add_generator(b, Role::Boost, i, *pick(Role::Boost, i, sr_boost(i)));
  const Role deformed = df.kind == SectorKind::Momentum ? Role::Momentum : Role::Coordinate;
  const Role other = df.kind == SectorKind::Momentum ? Role::Coordinate : Role::Momentum;
  const std::string letter = arguments(df.kind).sr_letter;
  for (int mu = 0; mu <= 3; ++mu) {
    Normal def = mu == 0 ? expand_sugar(df.f) : sym(letter + idx(mu)) * expand_sugar(df.g);
    add_generator(b, deformed, mu, *pick(deformed, mu, def));
  }
  for (int mu = 0; mu <= 3; ++mu) {
    if (auto r = pick(other, mu, Normal{})) add_generator(b, other, mu, *r);
  }
  std::string param;
  for (const auto* p : {"kappa", "kappabar"}) {
    VarId v = expr::symbol_id(p);
    if (df.f.depends_on(v) || df.g.depends_on(v)) param = p;
  }
  b.parameter = param;
  return b;
}

ClaimedTables claimed_tables(const Basis& b) {
  ClaimedTables t;
  auto gen = [&](Role r, int i) { return b.get(r, i).symbol(); };
  auto gid = [&](Role r, int i) { return b.get(r, i).id(); };
  auto has = [&](Role r) { return b.has(r); };
  auto eps_sum = [&](int i, int j, Role r) {
    Normal s;
    for (int k = 1; k <= 3; ++k)
      if (int e = levi_civita(i, j, k)) s += Normal(static_cast<long>(e)) * gen(r, k);
    return s;
  };
  auto delta = [](int i, int j) { return Normal(i == j ? 1L : 0L); };

  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j)
      t.lorentz.add(gid(Role::Rotation, i), gid(Role::Rotation, j), eps_sum(i, j, Role::Rotation), tag("lorentz.rr"));
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      t.lorentz.add(gid(Role::Rotation, i), gid(Role::Boost, j), eps_sum(i, j, Role::Boost), tag("lorentz.rb"));
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j)
      t.lorentz.add(gid(Role::Boost, i), gid(Role::Boost, j), -eps_sum(i, j, Role::Rotation), tag("lorentz.bb"));

  const bool sr = b.family == "sr";
  const bool dual_like = b.sector() == SectorKind::Spacetime;
  const std::string pre = sr ? "sr" : (dual_like ? "dual" : "dsr1");

  // Rotations: the time-like component is invariant, the vector rotates.
  auto rotation_block = [&](Role target, const std::string& time_key, const std::string& space_key) {
    for (int i = 1; i <= 3; ++i) t.rotation.add(gid(Role::Rotation, i), gid(target, 0), Normal{}, tag(time_key));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        t.rotation.add(gid(Role::Rotation, i), gid(target, j), eps_sum(i, j, target), tag(space_key));
  };
  if (has(Role::Momentum)) {
    if (sr) rotation_block(Role::Momentum, "sr.rot.energy", "sr.rot.momentum");
    else if (dual_like) rotation_block(Role::Momentum, "dual.rot.energy", "dual.rot.momentum");
    else rotation_block(Role::Momentum, "dsr1.rot.energy", "dsr1.rot.momentum");
  }
  if (has(Role::Coordinate)) {
    if (sr) rotation_block(Role::Coordinate, "sr.rot.time", "sr.rot.space");
    else if (dual_like) rotation_block(Role::Coordinate, "dual.rot.time", "dual.rot.space");
    else rotation_block(Role::Coordinate, "dsr1.rot.time", "dsr1.rot.space");
  }

  // Boosts.
  if (sr) {
    for (int i = 1; i <= 3; ++i)
      t.boost.add(gid(Role::Boost, i), gid(Role::Momentum, 0), gen(Role::Momentum, i), tag("sr.boost.energy"));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        t.boost.add(gid(Role::Boost, i), gid(Role::Momentum, j), delta(i, j) * gen(Role::Momentum, 0),
                    tag("sr.boost.momentum"));
    for (int i = 1; i <= 3; ++i)
      t.boost.add(gid(Role::Boost, i), gid(Role::Coordinate, 0), gen(Role::Coordinate, i), tag("sr.boost.time"));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        t.boost.add(gid(Role::Boost, i), gid(Role::Coordinate, j), delta(i, j) * gen(Role::Coordinate, 0),
                    tag("sr.boost.space"));
  } else {
    DeformationTriple tr = effective_triple(b);
    Normal A = in_generators(b, tr.A);
    Normal B = in_generators(b, tr.B);
    Normal D = in_generators(b, tr.D);
    const Role def = dual_like ? Role::Coordinate : Role::Momentum;
    const std::string k0 = dual_like ? "dual.boost.time" : "dsr1.boost.energy";
    const std::string kv = dual_like ? "dual.boost.space" : "dsr1.boost.momentum";
    for (int i = 1; i <= 3; ++i) t.boost.add(gid(Role::Boost, i), gid(def, 0), gen(def, i) * D, tag(k0));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        t.boost.add(gid(Role::Boost, i), gid(def, j), delta(i, j) * A + gen(def, i) * gen(def, j) * B, tag(kv));
    if (b.family == "dsr1" && has(Role::Coordinate)) {
      Normal inv = sym("kappa").inverse();
      for (int i = 1; i <= 3; ++i)
        t.boost.add(gid(Role::Boost, i), gid(Role::Coordinate, 0),
                    gen(Role::Coordinate, i) - inv * gen(Role::Boost, i), tag("dsr1.boost.time"));
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
          t.boost.add(gid(Role::Boost, i), gid(Role::Coordinate, j),
                      delta(i, j) * gen(Role::Coordinate, 0) - inv * eps_sum(i, j, Role::Rotation),
                      tag("dsr1.boost.space"));
    }
    if (b.family == "dual" && has(Role::Momentum)) {
      Normal kb = sym("kappabar");
      for (int i = 1; i <= 3; ++i)
        t.boost.add(gid(Role::Boost, i), gid(Role::Momentum, 0), gen(Role::Momentum, i) + kb * gen(Role::Boost, i),
                    tag("dual.boost.energy"));
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
          t.boost.add(gid(Role::Boost, i), gid(Role::Momentum, j),
                      delta(i, j) * gen(Role::Momentum, 0) + kb * eps_sum(i, j, Role::Rotation),
                      tag("dual.boost.momentum"));
    }
  }

  // Phase space.
  auto commuting = [&](Role r, const std::string& key) {
    for (int mu = 0; mu <= 3; ++mu)
      for (int nu = mu + 1; nu <= 3; ++nu) t.phase.add(gid(r, mu), gid(r, nu), Normal{}, tag(key));
  };
  if (sr) {
    for (int mu = 0; mu <= 3; ++mu)
      for (int nu = 0; nu <= 3; ++nu)
        t.phase.add(gid(Role::Coordinate, mu), gid(Role::Momentum, nu),
                    Normal(mu == nu ? static_cast<long>(canonical::MetricSignature::eta(mu)) : 0L),
                    tag("sr.phase.xp"));
    commuting(Role::Coordinate, "sr.phase.commute");
    commuting(Role::Momentum, "sr.phase.commute");
  } else if (b.family == "dsr1" && has(Role::Coordinate)) {
    Normal inv = sym("kappa").inverse();
    t.phase.add(gid(Role::Coordinate, 0), gid(Role::Momentum, 0), Normal(-1), tag("dsr1.phase.x0p0"));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        t.phase.add(gid(Role::Coordinate, i), gid(Role::Momentum, j), delta(i, j), tag("dsr1.phase.xipj"));
    for (int i = 1; i <= 3; ++i)
      for (int j = i + 1; j <= 3; ++j)
        t.phase.add(gid(Role::Coordinate, i), gid(Role::Coordinate, j), Normal{}, tag("dsr1.phase.commute"));
    for (int i = 1; i <= 3; ++i)
      t.phase.add(gid(Role::Momentum, 0), gid(Role::Coordinate, i), Normal{}, tag("dsr1.phase.commute"));
    for (int i = 1; i <= 3; ++i)
      t.phase.add(gid(Role::Coordinate, 0), gid(Role::Momentum, i), inv * gen(Role::Momentum, i),
                  tag("dsr1.phase.x0pi"));
    for (int i = 1; i <= 3; ++i)
      t.phase.add(gid(Role::Coordinate, 0), gid(Role::Coordinate, i), -inv * gen(Role::Coordinate, i),
                  tag("dsr1.phase.x0xi"));
    commuting(Role::Momentum, "dsr1.momenta");
  } else if (b.family == "dual" && has(Role::Momentum)) {
    Normal kb = sym("kappabar");
    t.phase.add(gid(Role::Momentum, 0), gid(Role::Coordinate, 0), Normal(1), tag("dual.phase.p0x0"));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        t.phase.add(gid(Role::Momentum, i), gid(Role::Coordinate, j), -delta(i, j), tag("dual.phase.pixj"));
    for (int i = 1; i <= 3; ++i)
      t.phase.add(gid(Role::Momentum, i), gid(Role::Coordinate, 0), Normal{}, tag("dual.phase.commute"));
    for (int i = 1; i <= 3; ++i)
      for (int j = i + 1; j <= 3; ++j)
        t.phase.add(gid(Role::Momentum, i), gid(Role::Momentum, j), Normal{}, tag("dual.phase.commute"));
    for (int i = 1; i <= 3; ++i)
      t.phase.add(gid(Role::Momentum, 0), gid(Role::Coordinate, i), -kb * gen(Role::Coordinate, i),
                  tag("dual.phase.p0xi"));
    for (int i = 1; i <= 3; ++i)
      t.phase.add(gid(Role::Momentum, 0), gid(Role::Momentum, i), kb * gen(Role::Momentum, i),
                  tag("dual.phase.p0pi"));
    commuting(Role::Coordinate, "dual.coordinates.commute");
  } else if (dual_like) {
    commuting(Role::Coordinate, "dual.coordinates.commute");
  } else {
    commuting(Role::Momentum, "dsr1.momenta");
  }
  (void)pre;
  return t;
}

}  // namespace kpa::bases
