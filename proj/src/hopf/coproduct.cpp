#include "kpa/hopf/coproduct.hpp"

#include <algorithm>
#include <map>

#include "kpa/canonical/bracket.hpp"
#include "kpa/expr/expr.hpp"

namespace kpa::hopf {

namespace {

Normal sym(const std::string& s) { return Normal::symbol(s); }

std::string strip_leg(const std::string& key) { return key.substr(0, key.find('@')); }

int leg_of(VarId v) {
  for (VarId s : expr::var_info(v).symbols) {
    const std::string& k = expr::var_info(s).key;
    auto at = k.find('@');
    if (at != std::string::npos) return std::stoi(k.substr(at + 1));
  }
  const std::string& k = expr::var_info(v).key;
  auto at = k.find('@');
  return at == std::string::npos ? 0 : std::stoi(k.substr(at + 1));
}

// Renames legs through temporaries so that overlapping renames stay acyclic.
Normal relabel(const Normal& e, const std::vector<std::string>& gens, const std::map<int, int>& legs) {
  std::map<VarId, Normal> to_tmp;
  std::map<VarId, Normal> from_tmp;
  for (const auto& [from, to] : legs) {
    for (const auto& g : gens) {
      to_tmp.emplace(expr::symbol_id(leg_name(g, from)), sym(leg_name(g, 1000 + from)));
      from_tmp.emplace(expr::symbol_id(leg_name(g, 1000 + from)), sym(leg_name(g, to)));
    }
  }
  return subst(subst(e, to_tmp), from_tmp);
}

Normal leg_zero(const Normal& e, const std::vector<std::string>& gens, int leg) {
  std::map<VarId, Normal> m;
  for (const auto& g : gens) m.emplace(expr::symbol_id(leg_name(g, leg)), Normal{});
  return subst(e, m);
}

Normal strip(const Normal& e, const std::vector<std::string>& gens, int leg) {
  std::map<VarId, Normal> m;
  for (const auto& g : gens) m.emplace(expr::symbol_id(leg_name(g, leg)), sym(g));
  return subst(e, m);
}

bool is_primitive(const Coproduct& c, std::size_t k) {
  const std::string& g = c.generators[k];
  return c.images[k].value == sym(leg_name(g, 1)) + sym(leg_name(g, 2));
}

std::vector<VarId> parameter_ids() {
  return {expr::symbol_id("kappa"), expr::symbol_id("kappabar"), expr::symbol_id("m")};
}

std::string idx(int i) { return std::to_string(i); }

std::vector<std::string> names(const std::string& letter, const std::string& suffix) {
  std::vector<std::string> out;
  for (int i = 0; i <= 3; ++i) out.push_back(letter + idx(i) + suffix);
  return out;
}

}  // namespace

std::string leg_name(const std::string& generator, int leg) { return generator + "@" + std::to_string(leg); }

Normal on_leg(const Normal& e, const std::vector<std::string>& generators, int leg) {
  std::map<VarId, Normal> m;
  for (const auto& g : generators) m.emplace(expr::symbol_id(g), sym(leg_name(g, leg)));
  return subst(e, m);
}

TensorExpr tensor(const Normal& a, const Normal& b, const std::vector<std::string>& generators) {
  return TensorExpr{2, on_leg(a, generators, 1) * on_leg(b, generators, 2)};
}

TensorExpr operator+(const TensorExpr& a, const TensorExpr& b) { return {std::max(a.legs, b.legs), a.value + b.value}; }
TensorExpr operator-(const TensorExpr& a, const TensorExpr& b) { return {std::max(a.legs, b.legs), a.value - b.value}; }
TensorExpr operator*(const TensorExpr& a, const TensorExpr& b) { return {std::max(a.legs, b.legs), a.value * b.value}; }

std::string TensorExpr::str() const {
  // Each term is printed leg by leg; a monomial denominator (exp atoms with
  // negative exponents) is split across legs the same way.
  if (!value.den().is_monomial()) return value.str();
  std::map<VarId, Normal> plain;
  for (VarId s : value.free_symbols()) {
    const std::string& k = expr::var_info(s).key;
    if (k.find('@') != std::string::npos) plain.emplace(s, sym(strip_leg(k)));
  }
  const auto size = static_cast<std::size_t>(legs) + 1;
  auto split = [&](const expr::Monomial& m) {
    std::vector<expr::Monomial> parts(size);
    for (const auto& [v, e] : m.factors()) {
      auto l = static_cast<std::size_t>(std::clamp(leg_of(v), 0, legs));
      parts[l] = parts[l] * expr::Monomial::of(v, e);
    }
    return parts;
  };
  const auto& den_term = value.den().leading();
  const auto den_parts = split(den_term.mono);
  auto part = [&](const expr::Monomial& n, const expr::Monomial& d, const Rational& c) {
    return Normal::fraction(expr::Poly::term(n, c), expr::Poly::term(d, Rational(1)));
  };
  std::string out;
  for (const auto& t : value.num().terms()) {
    const auto parts = split(t.mono);
    Normal coef = part(parts[0], den_parts[0], t.coef / den_term.coef);
    std::string term;
    for (std::size_t l = 1; l < size; ++l) {
      std::string s = subst(part(parts[l], den_parts[l], Rational(1)), plain).str();
      if (s.find_first_of("+-") != std::string::npos && s.size() > 1 && s.front() != '-') s = "(" + s + ")";
      term += (l > 1 ? " (x) " : "") + s;
    }
    std::string c = coef.str();
    const bool negative = !c.empty() && c[0] == '-';
    if (negative) c = c.substr(1);
    if (c != "1") term = (c.find_first_of("+-") != std::string::npos ? "(" + c + ")" : c) + "*" + term;
    if (out.empty()) out = negative ? "-" + term : term;
    else out += (negative ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

const TensorExpr& Coproduct::image(const std::string& generator) const {
  for (std::size_t k = 0; k < generators.size(); ++k)
    if (generators[k] == generator) return images[k];
  throw HopfError("coproduct " + name + " has no generator " + generator);
}

Coproduct primitive_coproduct(const std::string& name, Sector sector, std::vector<std::string> generators,
                              std::vector<std::string> partners) {
  Coproduct c{name, sector, std::move(generators), std::move(partners), {}};
  for (const auto& g : c.generators) c.images.push_back(TensorExpr{2, sym(leg_name(g, 1)) + sym(leg_name(g, 2))});
  return c;
}

Coproduct twist_coproduct(const std::string& name, Sector sector, std::vector<std::string> generators,
                          std::vector<std::string> partners, const Normal& lambda) {
  Coproduct c = primitive_coproduct(name, sector, std::move(generators), std::move(partners));
  const Normal twist = exp(lambda * sym(leg_name(c.generators[0], 1)));
  for (std::size_t k = 1; k < c.generators.size(); ++k) {
    const std::string& g = c.generators[k];
    c.images[k].value = sym(leg_name(g, 1)) + twist * sym(leg_name(g, 2));
  }
  return c;
}

std::vector<std::string> builtin_coproduct_names() {
  return {"dsr1-momentum", "dsr1-spacetime", "dual-momentum", "dual-spacetime",
          "primitive",     "primitive-spacetime", "corrupted"};
}

Coproduct builtin_coproduct(const std::string& name) {
  if (name == "dsr1-momentum")
    return twist_coproduct(name, Sector::Momenta, names("P", ""), names("X", ""), -sym("kappa").inverse());
  if (name == "dsr1-spacetime") return primitive_coproduct(name, Sector::Coordinates, names("X", ""), names("P", ""));
  if (name == "dual-momentum")
    return primitive_coproduct(name, Sector::Momenta, names("P", "bar"), names("X", "bar"));
  if (name == "dual-spacetime")
    return twist_coproduct(name, Sector::Coordinates, names("X", "bar"), names("P", "bar"), -sym("kappabar"));
  if (name == "primitive") return primitive_coproduct(name, Sector::Momenta, names("p", ""), names("x", ""));
  if (name == "primitive-spacetime")
    return primitive_coproduct(name, Sector::Coordinates, names("x", ""), names("p", ""));
  if (name == "corrupted") {
    Coproduct c = builtin_coproduct("dsr1-momentum");
    c.name = name;
    const Normal kappa = sym("kappa");
    const Normal twist = exp(-sym(leg_name("P0", 1)).pow(2) / kappa.pow(2));
    for (std::size_t k = 1; k < 4; ++k) {
      const std::string& g = c.generators[k];
      c.images[k].value = sym(leg_name(g, 1)) + twist * sym(leg_name(g, 2));
    }
    return c;
  }
  std::string known;
  for (const auto& n : builtin_coproduct_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown coproduct '" + name + "' (known: " + known + ")");
}

TensorExpr parse_tensor(const std::string& text, const expr::SymbolTable& table,
                        const std::vector<std::string>& generators) {
  constexpr char kMark = '\x01';
  std::string s;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 3, "(x)") == 0) {
      s += kMark;
      i += 2;
    } else {
      s += text[i];
    }
  }
  // Split at top-level signs; a sign after ^, * or / belongs to an operand.
  std::vector<std::pair<int, std::string>> terms;
  int depth = 0;
  int sign = 1;
  std::string cur;
  char prev = 0;
  auto blank = [](const std::string& t) { return t.find_first_not_of(" \t") == std::string::npos; };
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    const bool split = depth == 0 && (ch == '+' || ch == '-') && prev != '^' && prev != '*' && prev != '/' &&
                       prev != kMark;
    if (split) {
      if (!blank(cur)) {
        terms.emplace_back(sign, cur);
        sign = 1;
      }
      cur.clear();
      if (ch == '-') sign = -sign;
    } else {
      cur += ch;
    }
    if (ch != ' ' && ch != '\t') prev = ch;
  }
  if (blank(cur)) throw ParseError("empty tensor term", 1, static_cast<int>(text.size()));
  terms.emplace_back(sign, cur);
  TensorExpr out;
  for (const auto& [sg, term] : terms) {
    auto mark = term.find(kMark);
    if (mark == std::string::npos || term.find(kMark, mark + 1) != std::string::npos)
      throw ParseError("tensor term needs exactly one (x): " + term, 1, 1);
    Normal a = expr::to_normal(expr::parse(term.substr(0, mark), table));
    Normal b = expr::to_normal(expr::parse(term.substr(mark + 1), table));
    out = out + TensorExpr{2, Normal(static_cast<long>(sg)) * tensor(a, b, generators).value};
  }
  return out;
}

TensorExpr apply_coproduct(const Coproduct& c, const Normal& e) {
  std::set<VarId> gens;
  std::set<VarId> primitive;
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    VarId v = expr::symbol_id(c.generators[k]);
    gens.insert(v);
    if (is_primitive(c, k)) primitive.insert(v);
  }
  std::set<VarId> vars = e.variables();
  for (VarId v : vars) {
    const auto& info = expr::var_info(v);
    if (info.kind == expr::AtomKind::Symbol) continue;
    bool touches = false;
    bool ok = info.kind == expr::AtomKind::Exp;
    for (VarId s : info.symbols) {
      if (!gens.count(s)) continue;
      touches = true;
      if (!primitive.count(s)) ok = false;
    }
    if (touches && !ok) throw HopfError("coproduct of " + info.key + " is not defined by " + c.name);
  }
  std::map<VarId, Normal> m;
  for (std::size_t k = 0; k < c.generators.size(); ++k) m.emplace(expr::symbol_id(c.generators[k]), c.images[k].value);
  return TensorExpr{2, subst(e, m)};
}

HopfCheck check_coassociativity(const Coproduct& c) {
  HopfCheck out{true, {}, {}, {}};
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    const Normal& d = c.images[k].value;
    // (Delta (x) id): leg 2 moves to 3, leg 1 is expanded into legs 1, 2.
    std::map<VarId, Normal> left_map;
    std::map<VarId, Normal> right_map;
    for (std::size_t j = 0; j < c.generators.size(); ++j) {
      const std::string& g = c.generators[j];
      left_map.emplace(expr::symbol_id(leg_name(g, 1001)), c.images[j].value);
      right_map.emplace(expr::symbol_id(leg_name(g, 1002)), relabel(c.images[j].value, c.generators, {{1, 2}, {2, 3}}));
    }
    Normal left = subst(relabel(d, c.generators, {{1, 1001}, {2, 3}}), left_map);
    Normal right = subst(relabel(d, c.generators, {{2, 1002}}), right_map);
    Normal r = left - right;
    if (!r.is_zero() && out.pass) {
      out.pass = false;
      out.generator = c.generators[k];
      out.residual = r;
      out.detail = "(Delta x id)Delta = " + TensorExpr{3, left}.str() + "; (id x Delta)Delta = " +
                   TensorExpr{3, right}.str();
    }
  }
  return out;
}

HopfCheck check_counit(const Coproduct& c) {
  HopfCheck out{true, {}, {}, {}};
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    const Normal& d = c.images[k].value;
    const std::string& g = c.generators[k];
    Normal r1 = leg_zero(d, c.generators, 1) - sym(leg_name(g, 2));
    Normal r2 = leg_zero(d, c.generators, 2) - sym(leg_name(g, 1));
    if ((!r1.is_zero() || !r2.is_zero()) && out.pass) {
      out.pass = false;
      out.generator = g;
      out.residual = r1.is_zero() ? r2 : r1;
    }
  }
  return out;
}

HopfCheck check_homomorphism(const Coproduct& c, const canonical::RelationTable& relations) {
  HopfCheck out{true, {}, {}, {}};
  const auto& gens = c.generators;
  auto bracket_of = [&](const std::string& a, const std::string& b) {
    return relations.lookup(expr::symbol_id(a), expr::symbol_id(b));
  };
  std::vector<std::string> central;
  for (const auto& g : gens) {
    bool is_central = true;
    for (const auto& h : gens) {
      if (g == h) continue;
      auto v = bracket_of(g, h);
      if (!v || !v->is_zero()) is_central = false;
    }
    if (is_central) central.push_back(g);
  }
  auto central_gen = [&](const std::string& g) { return std::find(central.begin(), central.end(), g) != central.end(); };

  canonical::AbstractAlgebra alg;
  alg.parameters = parameter_ids();
  for (int l = 1; l <= 2; ++l) {
    for (const auto& g : gens) {
      VarId id = expr::symbol_id(leg_name(g, l));
      alg.table.declare(id);
      if (central_gen(g)) alg.commuting.insert(id);
    }
    for (const auto& r : relations.relations()) {
      const std::string a = expr::var_info(r.a).key;
      const std::string b = expr::var_info(r.b).key;
      if (central_gen(a) && central_gen(b)) continue;
      alg.table.add(leg_name(a, l), leg_name(b, l), on_leg(r.rhs, gens, l));
    }
  }
  for (const auto& g : gens)
    for (const auto& h : gens)
      if (!(central_gen(g) && central_gen(h))) alg.table.add(leg_name(g, 1), leg_name(h, 2), Normal{});

  for (const auto& r : relations.relations()) {
    const std::string a = expr::var_info(r.a).key;
    const std::string b = expr::var_info(r.b).key;
    try {
      Normal lhs = canonical::table_bracket(alg, c.image(a).value, c.image(b).value);
      Normal rhs = apply_coproduct(c, r.rhs).value;
      Normal d = lhs - rhs;
      if (!d.is_zero() && out.pass) {
        out.pass = false;
        out.generator = "{" + a + ", " + b + "}";
        out.residual = d;
      }
    } catch (const Error& e) {
      if (out.pass) {
        out.pass = false;
        out.generator = "{" + a + ", " + b + "}";
        out.detail = e.what();
      }
    }
  }
  return out;
}

Rational Pairing::value(Sector y_sector, int mu, int nu) const {
  if (mu != nu) return Rational(0);
  const int eta = canonical::MetricSignature::eta(mu);
  return Rational(sign * (y_sector == Sector::Coordinates ? eta : -eta));
}

Normal twist_parameter(const Coproduct& c) {
  if (c.generators.size() != 4) throw HopfError(c.name + " does not have four generators");
  if (!is_primitive(c, 0)) throw HopfError(c.name + ": " + c.generators[0] + " is not primitive");
  const Normal y0 = sym(leg_name(c.generators[0], 1));
  const VarId y0_id = expr::symbol_id(leg_name(c.generators[0], 1));
  std::optional<Normal> lambda;
  for (std::size_t k = 1; k < 4; ++k) {
    const std::string& g = c.generators[k];
    const Normal right = sym(leg_name(g, 2));
    Normal twist = (c.images[k].value - sym(leg_name(g, 1))) / right;
    bool only_y0 = true;
    for (VarId s : twist.free_symbols())
      if (expr::var_info(s).key.find('@') != std::string::npos && s != y0_id) only_y0 = false;
    if (!only_y0 || twist.is_zero()) throw HopfError(c.name + ": Delta(" + g + ") is not of exponential-twist form");
    Normal l = diff(twist, y0_id) / twist;
    if (!diff(l, y0_id).is_zero() || exp(l * y0) != twist)
      throw HopfError(c.name + ": Delta(" + g + ") is not of exponential-twist form");
    if (lambda && *lambda != l) throw HopfError(c.name + ": twist exponents differ between components");
    lambda = l;
  }
  return *lambda;
}

canonical::RelationTable dualize_twist(const Coproduct& c, const Pairing& pairing) {
  (void)twist_parameter(c);
  const auto& Y = c.generators;
  const std::size_t n = Y.size();
  // Bilinear part c^{ab}_k of Delta(Y_k): coefficient of Y_a (x) Y_b at the identity.
  auto bilinear = [&](std::size_t k, std::size_t a, std::size_t b) {
    Normal d = diff(diff(c.images[k].value, leg_name(Y[a], 1)), leg_name(Y[b], 2));
    return leg_zero(leg_zero(d, Y, 1), Y, 2);
  };
  std::vector<Rational> p;
  for (std::size_t mu = 0; mu < n; ++mu)
    p.push_back(pairing.value(c.sector, static_cast<int>(mu), static_cast<int>(mu)));
  canonical::RelationTable table("dual of " + c.name);
  for (const auto& z : c.partners) table.declare(z);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      Normal rhs;
      for (std::size_t k = 0; k < n; ++k) {
        Normal cob = bilinear(k, a, b) - bilinear(k, b, a);
        if (cob.is_zero()) continue;
        rhs += cob * Normal(p[a] * p[b] / p[k]) * sym(c.partners[k]);
      }
      table.add(c.partners[a], c.partners[b], rhs);
    }
  }
  return table;
}

canonical::RelationTable heisenberg_cross(const Coproduct& momenta, const Coproduct& coordinates,
                                          const Pairing& pairing) {
  auto all_primitive = [](const Coproduct& c) {
    for (std::size_t k = 0; k < c.generators.size(); ++k)
      if (!is_primitive(c, k)) return false;
    return true;
  };
  const Coproduct* y = nullptr;
  const Coproduct* z = nullptr;
  if (all_primitive(coordinates)) {
    y = &momenta;
    z = &coordinates;
  } else if (all_primitive(momenta)) {
    y = &coordinates;
    z = &momenta;
  } else {
    throw HopfError("heisenberg_cross needs one primitive coproduct; neither " + momenta.name + " nor " +
                    coordinates.name + " is");
  }
  if (y->partners != z->generators)
    throw HopfError("coproducts " + momenta.name + " and " + coordinates.name + " are not paired sectors");
  canonical::RelationTable table("cross " + y->name + " / " + z->name);
  for (const auto& g : y->generators) table.declare(g);
  for (const auto& g : z->generators) table.declare(g);
  const auto& Y = y->generators;
  for (std::size_t mu = 0; mu < Y.size(); ++mu) {
    const Normal& d = y->images[mu].value;
    for (std::size_t nu = 0; nu < z->generators.size(); ++nu) {
      // <Y_(1), Z_nu> is the derivative of leg 1 at the identity contracted with the pairing.
      Normal acc;
      for (std::size_t a = 0; a < Y.size(); ++a) {
        Rational pv = pairing.value(y->sector, static_cast<int>(a), static_cast<int>(nu));
        if (pv == 0) continue;
        acc += Normal(pv) * leg_zero(diff(d, leg_name(Y[a], 1)), Y, 1);
      }
      table.add(Y[mu], z->generators[nu], strip(acc, Y, 2));
    }
  }
  return table;
}

}  // namespace kpa::hopf
