#include "kpa/expr/series.hpp"

#include <algorithm>
#include <functional>

#include "kpa/expr/errors.hpp"

namespace kpa::expr {

namespace {

/// Raised when the working precision is too low to decide a valuation.
struct InsufficientPrecision {};

thread_local int g_cap = 8;

Normal q(long n, long d = 1) { return Normal(Rational(n, d)); }

}  // namespace

Laurent Laurent::constant(const Normal& c) { return monomial(c, 0); }

Laurent Laurent::monomial(const Normal& c, int exponent) {
  Laurent l;
  if (!c.is_zero()) l.terms_.emplace(exponent, c);
  return l;
}

std::optional<int> Laurent::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

Normal Laurent::coefficient(int k) const {
  if (k >= precision_) throw InsufficientPrecision{};
  auto it = terms_.find(k);
  return it == terms_.end() ? Normal{} : it->second;
}

Laurent Laurent::truncate(int precision) const {
  Laurent r;
  r.precision_ = std::min(precision_, precision);
  for (const auto& [k, c] : terms_)
    if (k < r.precision_) r.terms_.emplace(k, c);
  return r;
}

Laurent operator+(const Laurent& a, const Laurent& b) {
  Laurent r;
  r.precision_ = std::min(a.precision_, b.precision_);
  for (const auto* s : {&a, &b}) {
    for (const auto& [k, c] : s->terms_) {
      if (k >= r.precision_) continue;
      auto it = r.terms_.find(k);
      if (it == r.terms_.end()) {
        r.terms_.emplace(k, c);
      } else {
        it->second = it->second + c;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
  }
  return r;
}

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

Laurent operator*(const Laurent& a, const Laurent& b) {
  int va = a.valuation().value_or(a.precision_);
  int vb = b.valuation().value_or(b.precision_);
  Laurent r;
  long pa = static_cast<long>(a.precision_) + vb;
  long pb = static_cast<long>(b.precision_) + va;
  r.precision_ = static_cast<int>(std::min<long>({pa, pb, Laurent::kExact}));
  for (const auto& [i, x] : a.terms_) {
    for (const auto& [j, y] : b.terms_) {
      if (i + j >= r.precision_) break;
      Normal t = x * y;
      auto it = r.terms_.find(i + j);
      if (it == r.terms_.end()) {
        r.terms_.emplace(i + j, t);
      } else {
        it->second = it->second + t;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
  }
  return r;
}

Laurent Laurent::scaled(const Normal& c) const {
  if (c.is_zero()) {
    Laurent r;
    r.precision_ = precision_;
    return r;
  }
  Laurent r = *this;
  for (auto& [k, x] : r.terms_) x = x * c;
  return r;
}

namespace {

/// Splits s = c * eps^v * (1 + u); returns relative precision of u.
struct UnitForm {
  Normal c;
  int v = 0;
  Laurent u;
  int precision = 0;
};

Laurent shifted(const Laurent& s, int by) {
  Laurent r;
  for (const auto& [k, c] : s.terms()) r = r + Laurent::monomial(c, k + by);
  int p = s.precision() >= Laurent::kExact ? Laurent::kExact : s.precision() + by;
  return r.truncate(p);
}

UnitForm unit_form(const Laurent& s) {
  auto v = s.valuation();
  if (!v) throw InsufficientPrecision{};
  UnitForm f;
  f.v = *v;
  f.c = s.coefficient(*v);
  f.precision = std::min(s.precision() - *v, g_cap);
  f.u = (shifted(s, -*v).scaled(f.c.inverse()) - Laurent::constant(Normal(1))).truncate(f.precision);
  return f;
}

/// sum_k a_k u^k for u of valuation >= 1, known to relative precision p.
Laurent power_series(const Laurent& u, int p, const std::function<Normal(int)>& a) {
  Laurent sum = Laurent::constant(a(0)).truncate(p);
  Laurent uk = Laurent::constant(Normal(1));
  for (int k = 1; k < p; ++k) {
    uk = (uk * u).truncate(p);
    if (uk.terms().empty()) break;
    sum = sum + uk.scaled(a(k));
  }
  return sum.truncate(p);
}

}  // namespace

Laurent Laurent::inverse() const {
  UnitForm f = unit_form(*this);
  Laurent s = power_series(f.u, f.precision, [](int k) { return Normal(k % 2 == 0 ? 1L : -1L); });
  return shifted(s.scaled(f.c.inverse()), -f.v);
}

Laurent Laurent::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  Laurent r = Laurent::constant(Normal(1));
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

namespace {

Laurent exp_series(const Laurent& s) {
  for (const auto& [k, c] : s.terms())
    if (k < 0) throw PoleError("essential singularity of exp at the expansion point");
  if (s.precision() <= 0) throw InsufficientPrecision{};
  Normal c0 = s.coefficient(0);
  Laurent u = (s - Laurent::constant(c0));
  int p = std::min(s.precision(), g_cap);
  std::vector<Normal> inv_fact{Normal(1)};
  Laurent r = power_series(u.truncate(p), p, [&](int k) {
    while (static_cast<int>(inv_fact.size()) <= k)
      inv_fact.push_back(inv_fact.back() * q(1, static_cast<long>(inv_fact.size())));
    return inv_fact[static_cast<std::size_t>(k)];
  });
  return r.scaled(exp(c0));
}

Laurent sqrt_series(const Laurent& s) {
  UnitForm f = unit_form(s);
  if (f.v % 2 != 0) throw PoleError("square-root branch point at the expansion point");
  std::vector<Rational> coef{Rational(1)};
  Laurent r = power_series(f.u, f.precision, [&](int k) {
    while (static_cast<int>(coef.size()) <= k) {
      auto j = static_cast<long>(coef.size());
      coef.push_back(coef.back() * (Rational(1, 2) - (j - 1)) / j);
    }
    return Normal(coef[static_cast<std::size_t>(k)]);
  });
  return shifted(r.scaled(sqrt(f.c)), f.v / 2);
}

Laurent ln_series(const Laurent& s) {
  UnitForm f = unit_form(s);
  if (f.v != 0) throw PoleError("logarithmic singularity at the expansion point");
  Laurent r = power_series(f.u, f.precision, [](int k) {
    if (k == 0) return Normal{};
    return q(k % 2 == 1 ? 1 : -1, k);
  });
  return r + Laurent::constant(ln(f.c));
}

class Expander {
 public:
  explicit Expander(VarId eps) : eps_(eps) {}

  Laurent normal(const Normal& e) {
    Laurent n = poly(e.num());
    if (e.den().is_constant()) return n;
    return n * poly(e.den()).inverse();
  }

 private:
  Laurent poly(const Poly& p) {
    Laurent sum;
    for (const auto& t : p.terms()) {
      Laurent term = Laurent::constant(Normal(t.coef));
      Normal plain(1);
      for (const auto& [v, e] : t.mono.factors()) {
        if (v == eps_) {
          term = shifted(term, e);
        } else if (!var_info(v).symbols.count(eps_)) {
          plain = plain * Normal::var(v).pow(e);
        } else {
          term = term * var(v).pow(e);
        }
      }
      sum = sum + term.scaled(plain);
    }
    return sum;
  }

  Laurent var(VarId v) {
    auto it = memo_.find(v);
    if (it != memo_.end()) return it->second;
    const VarInfo& info = var_info(v);
    Laurent r;
    switch (info.kind) {
      case AtomKind::Sqrt: r = sqrt_series(normal(info.args[0])); break;
      case AtomKind::Exp: r = exp_series(normal(info.args[0])); break;
      case AtomKind::Ln: r = ln_series(normal(info.args[0])); break;
      case AtomKind::Function: r = function(info); break;
      case AtomKind::Symbol: r = Laurent::constant(Normal::var(v)); break;
    }
    memo_.emplace(v, r);
    return r;
  }

  Laurent function(const VarInfo& info) {
    std::vector<Normal> centers;
    std::vector<Laurent> deltas;
    int p = g_cap;
    for (const auto& a : info.args) {
      Laurent s = normal(a);
      for (const auto& [k, c] : s.terms())
        if (k < 0) throw PoleError("pole inside argument of " + info.name);
      if (s.precision() <= 0) throw InsufficientPrecision{};
      Normal c0 = s.coefficient(0);
      centers.push_back(c0);
      deltas.push_back(s - Laurent::constant(c0));
      p = std::min(p, s.precision());
    }
    Laurent sum;
    std::vector<int> alpha(info.args.size(), 0);
    std::function<void(std::size_t, int, Laurent, Rational)> walk = [&](std::size_t k, int used, Laurent prod,
                                                                      Rational inv_fact) {
      if (k == alpha.size()) {
        std::vector<int> orders = info.orders;
        for (std::size_t i = 0; i < orders.size(); ++i) orders[i] += alpha[i];
        sum = sum + prod.scaled(apply(info.name, centers, orders) * Normal(inv_fact));
        return;
      }
      Laurent pk = prod;
      Rational f = inv_fact;
      for (int a = 0; used + a < p; ++a) {
        alpha[k] = a;
        walk(k + 1, used + a, pk, f);
        pk = (pk * deltas[k]).truncate(p);
        f /= (a + 1);
        if (pk.terms().empty()) break;
      }
      alpha[k] = 0;
    };
    walk(0, 0, Laurent::constant(Normal(1)), Rational(1));
    return sum.truncate(p);
  }

  VarId eps_;
  std::map<VarId, Laurent> memo_;
};

}  // namespace

Normal SeriesPoly::truncated(const Normal& eps) const {
  Normal s;
  for (int k = order; k >= 0; --k) s = s * eps + coefficient(k);
  return s;
}

SeriesPoly series(const Normal& e, const std::string& var, std::optional<Rational> center, int order) {
  if (order < 0) throw Error("series order must be non-negative");
  const VarId eps = symbol_id("eps_series");
  Normal eps_n = Normal::var(eps);
  Normal repl = center ? Normal(*center) + eps_n : eps_n.inverse();
  Normal f = subst(e, std::map<VarId, Normal>{{symbol_id(var), repl}});
  struct CapGuard {
    int saved = g_cap;
    ~CapGuard() { g_cap = saved; }
  } guard;
  for (int extra : {2, 6, 14, 30}) {
    g_cap = order + 1 + extra;
    try {
      Laurent l = Expander(eps).normal(f);
      if (l.precision() <= order) continue;
      for (const auto& [k, c] : l.terms())
        if (k < 0) throw PoleError("expansion of " + e.str() + " in " + var + " has a pole at the center");
      SeriesPoly s;
      s.variable = var;
      s.center = center;
      s.order = order;
      for (int k = 0; k <= order; ++k) s.coefficients.push_back(l.coefficient(k));
      return s;
    } catch (const InsufficientPrecision&) {
    }
  }
  throw Error("series expansion of " + e.str() + " did not reach order " + std::to_string(order));
}

SeriesPoly series(const Expr& e, const std::string& var, std::optional<Rational> center, int order) {
  return series(to_normal(e), var, std::move(center), order);
}

}  // namespace kpa::expr
