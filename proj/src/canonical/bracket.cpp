#include "kpa/canonical/bracket.hpp"

#include <algorithm>

#include "kpa/expr/errors.hpp"
#include "kpa/expr/expr.hpp"

namespace kpa::canonical {

using expr::diff;
using expr::symbol_id;

Normal poisson(const Normal& a_in, const Normal& b_in) {
  static const std::array<VarId, 4> x{symbol_id("x0"), symbol_id("x1"), symbol_id("x2"), symbol_id("x3")};
  static const std::array<VarId, 4> p{symbol_id("p0"), symbol_id("p1"), symbol_id("p2"), symbol_id("p3")};
  Normal a = expr::expand_sugar(a_in);
  Normal b = expr::expand_sugar(b_in);
  Normal sum;
  for (int mu = 0; mu < 4; ++mu) {
    auto i = static_cast<std::size_t>(mu);
    Normal term;
    Normal dax = diff(a, x[i]);
    if (!dax.is_zero()) term += dax * diff(b, p[i]);
    Normal dbx = diff(b, x[i]);
    if (!dbx.is_zero()) term -= dbx * diff(a, p[i]);
    if (term.is_zero()) continue;
    sum += MetricSignature::eta(mu) == 1 ? term : -term;
  }
  return sum;
}

namespace {

std::vector<VarId> generators_in(const AbstractAlgebra& alg, const Normal& e) {
  std::vector<VarId> out;
  for (VarId s : e.free_symbols())
    if (alg.is_generator(s)) out.push_back(s);
  std::sort(out.begin(), out.end());
  for (VarId v : e.variables()) {
    const auto& info = expr::var_info(v);
    if (info.kind == expr::AtomKind::Symbol) continue;
    for (VarId s : info.symbols) {
      if (alg.is_generator(s) && !alg.commuting.count(s))
        throw Error("function " + info.key + " depends on the non-commuting generator " + expr::var_info(s).key);
    }
  }
  return out;
}

}  // namespace

Normal table_bracket(const AbstractAlgebra& alg, const Normal& a, const Normal& b) {
  auto ga = generators_in(alg, a);
  auto gb = generators_in(alg, b);
  Normal sum;
  for (VarId g : ga) {
    Normal da = diff(a, g);
    if (da.is_zero()) continue;
    for (VarId h : gb) {
      if (g == h) continue;
      auto t = alg.table.lookup(g, h);
      if (!t) {
        if (alg.commuting.count(g) && alg.commuting.count(h)) continue;
        throw Error("no relation declared for {" + expr::var_info(g).key + ", " + expr::var_info(h).key + "}");
      }
      if (t->is_zero()) continue;
      Normal db = diff(b, h);
      if (db.is_zero()) continue;
      sum += da * db * *t;
    }
  }
  return sum;
}

Bracket poisson_engine() { return [](const Normal& a, const Normal& b) { return poisson(a, b); }; }

Bracket table_engine(const AbstractAlgebra& alg) {
  return [alg](const Normal& a, const Normal& b) { return table_bracket(alg, a, b); };
}

Normal jacobiator(const Bracket& bracket, const Normal& a, const Normal& b, const Normal& c) {
  return bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
}

}  // namespace kpa::canonical
