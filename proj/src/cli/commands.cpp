#include "kpa/cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "kpa/bases/derivation.hpp"
#include "kpa/canonical/bracket.hpp"
#include "kpa/cli/suites.hpp"
#include "kpa/expr/errors.hpp"

namespace kpa::cli {

using bases::Basis;
using expr::Normal;
using expr::Rational;
using expr::VarId;

namespace {

Normal sym(const std::string& s) { return Normal::symbol(s); }

/// SR rotations and boosts, available under their lower-case names in every basis.
std::map<std::string, Normal> sr_lorentz() {
  std::map<std::string, Normal> m;
  for (int i = 1; i <= 3; ++i) {
    const int j = i % 3 + 1;
    const int k = j % 3 + 1;
    const std::string s = std::to_string(i);
    m["m" + s] = sym("x" + std::to_string(j)) * sym("p" + std::to_string(k)) -
                 sym("x" + std::to_string(k)) * sym("p" + std::to_string(j));
    m["n" + s] = sym("x" + s) * sym("p0") - sym("x0") * sym("p" + s);
  }
  return m;
}

std::map<std::string, Normal> realizations(const Basis& b) {
  std::map<std::string, Normal> m = sr_lorentz();
  for (const auto& g : b.generators) m[g.name] = g.realization;
  return m;
}

// Generic rational phase-space points; parameters stay symbolic.
std::vector<std::map<VarId, Normal>> fit_points(std::size_t n) {
  std::vector<std::map<VarId, Normal>> pts;
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::size_t k = 0; k < n; ++k) {
    std::map<VarId, Normal> pt;
    Normal xsq;
    Normal psq;
    for (int mu = 0; mu <= 3; ++mu) {
      const int a = primes[(k * 4 + static_cast<std::size_t>(mu)) % 12];
      const int c = primes[(k * 4 + static_cast<std::size_t>(mu) + 5) % 12];
      Rational xr(a, c + 1);
      Rational pr(c + mu, a + 3);
      xr.canonicalize();
      pr.canonicalize();
      const Normal x(xr);
      const Normal p(pr);
      pt[expr::symbol_id("x" + std::to_string(mu))] = x;
      pt[expr::symbol_id("p" + std::to_string(mu))] = p;
      if (mu > 0) {
        xsq += x * x;
        psq += p * p;
      }
    }
    pt[expr::symbol_id("xsq")] = xsq;
    pt[expr::symbol_id("psq")] = psq;
    pts.push_back(std::move(pt));
  }
  return pts;
}

// Solves M c = v over parameter expressions; nullopt when singular.
std::optional<std::vector<Normal>> solve(std::vector<std::vector<Normal>> M, std::vector<Normal> v) {
  const std::size_t n = v.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && M[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(M[piv], M[col]);
    std::swap(v[piv], v[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      const Normal f = M[r][col] / M[col][col];
      for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      v[r] -= f * v[col];
    }
  }
  std::vector<Normal> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = v[i] / M[i][i];
  return out;
}

bool phase_free(const Normal& e) {
  for (const auto* s : {"x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3", "xsq", "psq"})
    if (e.depends_on(expr::symbol_id(s))) return false;
  return true;
}

}  // namespace

expr::SymbolTable bracket_symbols(const Basis& b) {
  expr::SymbolTable t = expr::SymbolTable::standard();
  for (const auto& [name, _] : sr_lorentz()) t.add_symbol(name);
  for (const auto& g : b.generators) t.add_symbol(g.name);
  return t;
}

Normal to_phase_space(const Basis& b, const Normal& e) {
  std::map<std::string, Normal> m;
  for (const auto& [name, r] : realizations(b))
    if (e.depends_on(expr::symbol_id(name))) m[name] = r;
  return m.empty() ? e : expr::subst(e, m);
}

std::vector<std::string> generators_in_text(const Basis& b, const std::string& text) {
  const std::map<std::string, Normal> known = realizations(b);
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && known.count(cur) && std::find(out.begin(), out.end(), cur) == out.end()) out.push_back(cur);
    cur.clear();
  };
  for (char ch : text) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
      cur += ch;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::optional<Normal> fit_generators(const Basis& b, const Normal& value, const std::vector<std::string>& preferred) {
  if (value.is_zero()) return Normal{};
  const std::map<std::string, Normal> real = realizations(b);
  std::vector<std::string> names;
  auto add = [&](const std::string& n) {
    if (real.count(n) && std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  };
  for (const auto& n : preferred) add(n);
  for (const auto& g : b.generators) add(g.name);
  for (const auto& [n, _] : real) add(n);

  std::vector<Normal> rs;
  for (const auto& n : names) rs.push_back(real.at(n));
  rs.emplace_back(1);
  names.emplace_back("1");
  const std::size_t n = names.size();

  // Floating-point prescreen: one parameter point, several phase-space
  // points, each redrawn until every candidate evaluates.
  constexpr std::size_t kFloat = 8;
  std::mt19937_64 rng = expr::tagged_rng(7, "fit");
  std::vector<expr::Real> ftarget;
  std::vector<std::optional<std::vector<expr::Real>>> fvals(n, std::vector<expr::Real>{});
  expr::PhasePoint first;
  for (std::size_t k = 0; k < kFloat; ++k) {
    bool ok = false;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
      expr::PhasePoint pt = expr::sample_point(rng, false);
      if (k == 0) {
        first = pt;
      } else {
        for (const auto* par : {"kappa", "kappabar", "m"}) pt.set(par, first.at(par));
      }
      try {
        const expr::Real t = expr::eval(value, pt);
        std::vector<expr::Real> row;
        for (const auto& r : rs) row.push_back(expr::eval(r, pt));
        ftarget.push_back(t);
        for (std::size_t c = 0; c < n; ++c) fvals[c]->push_back(row[c]);
        ok = true;
      } catch (const Error&) {
      }
    }
    if (!ok) return std::nullopt;
  }
  auto float_fit = [&](const std::vector<std::size_t>& subset) {
    const std::size_t s = subset.size();
    for (std::size_t c : subset)
      if (!fvals[c]) return false;
    std::vector<std::vector<expr::Real>> M(s, std::vector<expr::Real>(s + 1));
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) M[r][c] = (*fvals[subset[c]])[r];
      M[r][s] = ftarget[r];
    }
    for (std::size_t col = 0; col < s; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < s; ++r)
        if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
      if (std::fabs(M[piv][col]) < 1e-300L) return false;
      std::swap(M[piv], M[col]);
      for (std::size_t r = 0; r < s; ++r) {
        if (r == col) continue;
        const expr::Real f = M[r][col] / M[col][col];
        for (std::size_t c = col; c <= s; ++c) M[r][c] -= f * M[col][c];
      }
    }
    for (std::size_t p = s; p < kFloat; ++p) {
      expr::Real sum = 0;
      for (std::size_t c = 0; c < s; ++c) sum += M[c][s] / M[c][c] * (*fvals[subset[c]])[p];
      if (!expr::close(sum, ftarget[p], 1e-8L)) return false;
    }
    return true;
  };

  // Exact confirmation at rational points, then symbolically.
  constexpr std::size_t kPoints = 5;
  const auto pts = fit_points(kPoints);
  std::optional<std::vector<Normal>> target;
  std::vector<std::optional<std::vector<Normal>>> vals(n);
  auto exact_values = [&](const Normal& e) {
    std::vector<Normal> v;
    for (const auto& pt : pts) v.push_back(expr::subst(e, pt));
    return v;
  };
  auto attempt = [&](const std::vector<std::size_t>& subset) -> std::optional<Normal> {
    if (!float_fit(subset)) return std::nullopt;
    try {
      if (!target) target = exact_values(value);
      for (std::size_t c : subset)
        if (!vals[c]) vals[c] = exact_values(rs[c]);
    } catch (const Error&) {
      return std::nullopt;
    }
    const std::size_t s = subset.size();
    std::vector<std::vector<Normal>> M(s, std::vector<Normal>(s));
    std::vector<Normal> v(s);
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) M[r][c] = (*vals[subset[c]])[r];
      v[r] = (*target)[r];
    }
    auto coeffs = solve(M, v);
    if (!coeffs) return std::nullopt;
    for (const auto& c : *coeffs)
      if (c.is_zero() || !phase_free(c)) return std::nullopt;
    for (std::size_t p = s; p < kPoints; ++p) {
      Normal sum;
      for (std::size_t c = 0; c < s; ++c) sum += (*coeffs)[c] * (*vals[subset[c]])[p];
      if (!(sum - (*target)[p]).is_zero()) return std::nullopt;
    }
    Normal phase;
    Normal in_gens;
    for (std::size_t c = 0; c < s; ++c) {
      phase += (*coeffs)[c] * rs[subset[c]];
      in_gens += (*coeffs)[c] * (names[subset[c]] == "1" ? Normal(1) : sym(names[subset[c]]));
    }
    if (!(phase - value).is_zero()) return std::nullopt;
    return in_gens;
  };

  for (std::size_t i = 0; i < n; ++i)
    if (auto r = attempt({i})) return r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (auto r = attempt({i, j})) return r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (auto r = attempt({i, j, k})) return r;
  return std::nullopt;
}

namespace {

bool confirm_by_table(const Basis& basis, const Normal& a, const Normal& b, BracketOutcome& out) {
  try {
    const canonical::AbstractAlgebra alg = claimed_algebra(basis);
    const Normal t = canonical::table_bracket(alg, a, b);
    SuiteConfig opts;
    const expr::Verdict v =
        comparator(opts, basis)(to_phase_space(basis, t), out.phase_space, numeric_options(opts, "bracket"));
    if (!v.pass) return false;
    out.generators = t;
    out.method = "table";
    out.on_shell = v.mode == expr::EqualityMode::Shell;
    return true;
  } catch (const Error&) {
    // Inputs outside the claimed algebra.
    return false;
  }
}

}  // namespace

BracketOutcome compute_bracket(const BasisConfig& cfg, const Normal& a, const Normal& b,
                               const std::vector<std::string>& preferred, bool table_first) {
  const Basis& basis = cfg.basis;
  BracketOutcome out;
  out.phase_space = canonical::poisson(to_phase_space(basis, a), to_phase_space(basis, b));
  if (table_first && confirm_by_table(basis, a, b, out)) return out;
  if (auto fit = fit_generators(basis, out.phase_space, preferred)) {
    out.generators = *fit;
    out.method = "fit";
    return out;
  }
  if (!table_first) confirm_by_table(basis, a, b, out);
  return out;
}

DerivedTriple derive_triple(const BasisConfig& cfg) {
  const Basis& b = cfg.basis;
  DerivedTriple out;
  const bool cataloged = b.triple_override || b.family == "dsr1" || b.family == "dual" || !b.functions;
  if (cataloged) {
    const bases::DeformationTriple eff = bases::effective_triple(b);
    if (!b.functions) {
      out.triple = eff;
      out.status = "exact";
    } else if (bases::compare_triples(*b.functions, eff, expr::EqualityMode::Exact).pass()) {
      out.triple = eff;
      out.status = "exact";
    } else if (bases::compare_triples(*b.functions, eff, expr::EqualityMode::Shell).pass()) {
      out.triple = eff;
      out.status = "shell";
    }
  }
  if (out.status.empty()) {
    out.triple = bases::derive_abd(*b.functions);
    out.status = "derived";
  }
  out.constraint = bases::constraint_value(out.triple);
  return out;
}

}  // namespace kpa::cli
