#include "kpa/expr/equality.hpp"

#include <cmath>

#include "kpa/expr/errors.hpp"
#include "kpa/expr/expr.hpp"

namespace kpa::expr {

std::string to_string(EqualityMode m) {
  switch (m) {
    case EqualityMode::Exact: return "exact";
    case EqualityMode::Shell: return "shell";
    case EqualityMode::Numeric: return "numeric";
  }
  return "?";
}

Normal shell_reduce(const Normal& e) {
  static const VarId p0 = symbol_id("p0");
  Normal x = expand_sugar(e);
  if (!x.depends_on(p0)) return x;
  auto sq = [](const char* s) { return Normal::symbol(s).pow(2); };
  Normal shell = sqrt(sq("m") + sq("p1") + sq("p2") + sq("p3"));
  return subst(x, std::map<VarId, Normal>{{p0, shell}});
}

NumericEvidence numeric_compare(const Normal& a, const Normal& b, const NumericOptions& options) {
  NumericEvidence ev;
  // The key-ordered tree fixes the evaluation order, so results do not depend
  // on the order in which atoms were interned (e.g. by other threads).
  const Expr ea = from_normal(a);
  const Expr eb = from_normal(b);
  auto rng = tagged_rng(options.seed, options.tag);
  int attempts = 0;
  while (ev.points < options.points && attempts < options.points * 8) {
    ++attempts;
    PhasePoint pt = sample_point(rng, options.on_shell);
    Real va = 0;
    Real vb = 0;
    try {
      if (options.prepare) options.prepare(pt);
      va = eval(ea, pt);
      vb = eval(eb, pt);
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(static_cast<double>(va)) || !std::isfinite(static_cast<double>(vb))) continue;
    ++ev.points;
    Real dev = relative_deviation(va, vb);
    bool ok = close(va, vb, options.tolerance);
    if (!ok) ev.pass = false;
    if (!ev.worst || dev > ev.max_deviation) {
      ev.max_deviation = dev;
      ev.worst = pt;
      ev.worst_lhs = va;
      ev.worst_rhs = vb;
    }
  }
  if (ev.points == 0) ev.pass = false;
  return ev;
}

namespace {
struct BudgetScope {
  std::size_t saved = term_budget();
  explicit BudgetScope(std::size_t b) { set_term_budget(b); }
  ~BudgetScope() { set_term_budget(saved); }
};
}  // namespace

Verdict equal(const Normal& a, const Normal& b, EqualityMode mode, const NumericOptions& options,
              std::size_t budget) {
  Verdict v;
  v.mode = mode;
  NumericOptions opts = options;
  if (mode == EqualityMode::Shell) opts.on_shell = true;
  if (mode != EqualityMode::Numeric) {
    try {
      BudgetScope scope(budget);
      Normal r = expand_sugar(a) - expand_sugar(b);
      if (mode == EqualityMode::Shell) r = shell_reduce(r);
      v.residual = r;
      v.pass = r.is_zero();
    } catch (const BudgetExceeded&) {
      v.numeric_only = true;
    }
  }
  v.evidence = numeric_compare(a, b, opts);
  if (mode == EqualityMode::Numeric || v.numeric_only) v.pass = v.evidence.pass;
  return v;
}

}  // namespace kpa::expr
