#include "kpa/expr/poly.hpp"

#include <algorithm>
#include <unordered_map>

namespace kpa::expr {

namespace {
thread_local std::size_t g_term_budget = 400000;

void check_budget(std::size_t n) {
  if (g_term_budget != 0 && n > g_term_budget) throw BudgetExceeded();
}
}  // namespace

void set_term_budget(std::size_t terms) { g_term_budget = terms; }
std::size_t term_budget() { return g_term_budget; }

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::of(VarId v, int exp) {
  Monomial m;
  if (exp != 0) m.factors_.emplace_back(v, exp);
  return m;
}

int Monomial::degree(VarId v) const {
  for (const auto& [var, e] : factors_) {
    if (var == v) return e;
    if (var > v) break;
  }
  return 0;
}

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() && b != other.factors_.end()) {
    if (a->first < b->first) {
      r.factors_.push_back(*a++);
    } else if (b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  r.factors_.insert(r.factors_.end(), a, factors_.end());
  r.factors_.insert(r.factors_.end(), b, other.factors_.end());
  return r;
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const {
  Monomial r;
  auto a = factors_.begin();
  for (const auto& [v, e] : other.factors_) {
    while (a != factors_.end() && a->first < v) r.factors_.push_back(*a++);
    if (a == factors_.end() || a->first != v || a->second < e) return std::nullopt;
    if (a->second > e) r.factors_.emplace_back(v, a->second - e);
    ++a;
  }
  r.factors_.insert(r.factors_.end(), a, factors_.end());
  return r;
}

Monomial Monomial::without(VarId v) const {
  Monomial r;
  for (const auto& f : factors_)
    if (f.first != v) r.factors_.push_back(f);
  return r;
}

Monomial Monomial::gcd(const Monomial& other) const {
  Monomial r;
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() && b != other.factors_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      r.factors_.emplace_back(a->first, std::min(a->second, b->second));
      ++a;
      ++b;
    }
  }
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ULL;
  for (const auto& [v, e] : factors_) {
    h ^= (static_cast<std::size_t>(v) << 8) ^ static_cast<std::size_t>(e);
    h *= 1099511628211ULL;
  }
  return h;
}

int lex_compare(const Monomial& a, const Monomial& b) {
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t i = 0;
  for (; i < fa.size() && i < fb.size(); ++i) {
    if (fa[i].first != fb[i].first) return fa[i].first < fb[i].first ? 1 : -1;
    if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second ? 1 : -1;
  }
  if (fa.size() == fb.size()) return 0;
  return fa.size() > fb.size() ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Poly

namespace {
bool lex_greater(const Term& a, const Term& b) { return lex_compare(a.mono, b.mono) > 0; }

struct MonoHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};
}  // namespace

Poly::Poly(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::variable(VarId v, int exp) { return term(Monomial::of(v, exp), 1); }

Poly Poly::term(const Monomial& m, const Rational& c) {
  Poly p;
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

Rational Poly::constant_value() const {
  if (terms_.empty()) return 0;
  return terms_.back().mono.is_one() ? terms_.back().coef : Rational(0);
}

bool Poly::contains(VarId v) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [v](const Term& t) { return t.mono.degree(v) != 0; });
}

std::set<VarId> Poly::variables() const {
  std::set<VarId> vs;
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors()) vs.insert(f.first);
  return vs;
}

int Poly::degree(VarId v) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree(v));
  return d;
}

std::vector<Poly> Poly::coefficients(VarId v) const {
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(degree(v)) + 1);
  for (const auto& t : terms_) {
    int k = t.mono.degree(v);
    buckets[static_cast<std::size_t>(k)].push_back({t.mono.without(v), t.coef});
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) {
    Poly p;
    p.terms_ = std::move(b);  // removing a variable keeps relative lex order
    out.push_back(std::move(p));
  }
  return out;
}

Poly Poly::derivative(VarId v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    int e = t.mono.degree(v);
    if (e == 0) continue;
    Monomial m = t.mono.without(v) * Monomial::of(v, e - 1);
    out.push_back({std::move(m), t.coef * e});
  }
  return from_terms(std::move(out));
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.front().mono;
  for (const auto& t : terms_) {
    if (g.is_one()) break;
    g = g.gcd(t.mono);
  }
  return g;
}

Poly Poly::divide_monomial(const Monomial& m) const {
  if (m.is_one()) return *this;
  Poly p;
  p.terms_.reserve(terms_.size());
  for (const auto& t : terms_) p.terms_.push_back({*t.mono.divide(m), t.coef});
  return p;
}

Poly Poly::multiply_monomial(const Monomial& m, const Rational& c) const {
  if (c == 0) return {};
  Poly p;
  p.terms_.reserve(terms_.size());
  for (const auto& t : terms_) p.terms_.push_back({t.mono * m, t.coef * c});
  return p;
}

Poly Poly::from_sorted_terms(std::vector<Term> terms) {
  Poly p;
  p.terms_ = std::move(terms);
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), lex_greater);
  Poly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
      if (p.terms_.back().coef == 0) p.terms_.pop_back();
    } else if (t.coef != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

namespace {
Poly merge(const Poly& a, const Poly& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() || ib != b.terms().end()) {
    int c;
    if (ia == a.terms().end()) c = -1;
    else if (ib == b.terms().end()) c = 1;
    else c = lex_compare(ia->mono, ib->mono);
    if (c > 0) {
      out.push_back(*ia++);
    } else if (c < 0) {
      out.push_back({ib->mono, subtract ? Rational(-ib->coef) : ib->coef});
      ++ib;
    } else {
      Rational s = subtract ? Rational(ia->coef - ib->coef) : Rational(ia->coef + ib->coef);
      if (s != 0) out.push_back({ia->mono, s});
      ++ia;
      ++ib;
    }
  }
  return Poly::from_sorted_terms(std::move(out));
}
}  // namespace

Poly& Poly::operator+=(const Poly& o) {
  if (o.is_zero()) return *this;
  *this = merge(*this, o, false);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.is_zero()) return *this;
  *this = merge(*this, o, true);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_constant()) return b * a.leading().coef;
  if (b.is_constant()) return a * b.leading().coef;
  check_budget(a.size() * b.size() / 4);
  std::unordered_map<Monomial, Rational, MonoHash> acc;
  acc.reserve(a.size() * b.size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      auto m = ta.mono * tb.mono;
      auto it = acc.find(m);
      if (it == acc.end()) acc.emplace(std::move(m), ta.coef * tb.coef);
      else it->second += ta.coef * tb.coef;
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.push_back({m, c});
  std::sort(out.begin(), out.end(), lex_greater);
  return Poly::from_sorted_terms(std::move(out));
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coef = -t.coef;
  return p;
}

Poly Poly::pow(unsigned n) const {
  Poly result(1);
  Poly base = *this;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coef != b.terms_[i].coef || !(a.terms_[i].mono == b.terms_[i].mono))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Division and gcd

std::optional<Poly> exact_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return Poly{};
  if (b.is_constant()) return a * Rational(1 / b.leading().coef);
  if (b.is_monomial()) {
    const auto& lb = b.leading();
    std::vector<Term> out;
    out.reserve(a.size());
    for (const auto& t : a.terms()) {
      auto q = t.mono.divide(lb.mono);
      if (!q) return std::nullopt;
      out.push_back({*q, t.coef / lb.coef});
    }
    return Poly::from_terms(std::move(out));
  }
  // Quick degree rejection.
  for (VarId v : b.variables())
    if (a.degree(v) < b.degree(v)) return std::nullopt;

  std::vector<Term> quotient;
  Poly r = a;
  const Term& lb = b.leading();
  while (!r.is_zero()) {
    const Term& lr = r.leading();
    auto q = lr.mono.divide(lb.mono);
    if (!q) return std::nullopt;
    Rational c = lr.coef / lb.coef;
    quotient.push_back({*q, c});
    r -= b.multiply_monomial(*q, c);
  }
  return Poly::from_terms(std::move(quotient));
}

Poly pseudo_remainder(const Poly& a, const Poly& b, VarId v) {
  const int db = b.degree(v);
  auto bc = b.coefficients(v);
  const Poly& lcb = bc.back();
  Poly r = a;
  while (!r.is_zero()) {
    int dr = r.degree(v);
    if (dr < db) break;
    auto rc = r.coefficients(v);
    Poly lcr = rc.back();
    Poly shifted = b * lcr;
    if (dr > db) shifted = shifted.multiply_monomial(Monomial::of(v, dr - db), 1);
    r = r * lcb - shifted;
  }
  return r;
}

namespace {

Poly make_monic(Poly p) {
  if (p.is_zero()) return p;
  Rational inv = 1 / p.leading().coef;
  return p * inv;
}

Poly gcd_impl(Poly a, Poly b);

Poly content_in(const Poly& p, VarId v) {
  auto cs = p.coefficients(v);
  Poly g;
  // Start with the smallest coefficient for faster convergence.
  std::sort(cs.begin(), cs.end(), [](const Poly& x, const Poly& y) { return x.size() < y.size(); });
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? make_monic(c) : gcd_impl(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

VarId pick_main_variable(const Poly& a, const Poly& b, const std::set<VarId>& common) {
  VarId best = *common.begin();
  int best_deg = 1 << 30;
  for (VarId v : common) {
    int d = std::max(a.degree(v), b.degree(v));
    if (d < best_deg) {
      best_deg = d;
      best = v;
    }
  }
  return best;
}

using Dense = std::vector<Rational>;  // coefficients by ascending degree

void trim(Dense& d) {
  while (!d.empty() && d.back() == 0) d.pop_back();
}

/// p with every variable but x replaced by a fixed small integer.
Dense evaluate_except(const Poly& p, VarId x) {
  Dense out(static_cast<std::size_t>(p.degree(x)) + 1);
  for (const auto& t : p.terms()) {
    Rational c = t.coef;
    int k = 0;
    for (const auto& [v, e] : t.mono.factors()) {
      if (v == x) {
        k = e;
        continue;
      }
      // Distinct, deterministic and unlikely to hit a root of small polynomials.
      Rational val(static_cast<long>(v % 89) * 2 + 3, static_cast<long>(v % 7) + 2);
      val.canonicalize();
      Rational pw = 1;
      for (int i = 0; i < e; ++i) pw *= val;
      c *= pw;
    }
    out[static_cast<std::size_t>(k)] += c;
  }
  trim(out);
  return out;
}

std::size_t dense_gcd_degree(Dense a, Dense b) {
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    while (a.size() >= b.size()) {
      const Rational q = a.back() / b.back();
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= q * b[i];
      a.pop_back();
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

/// True when primitive pa, pb are certainly coprime. Evaluation can only raise
/// the degree of the gcd as long as both leading coefficients survive it.
bool certainly_coprime(const Poly& pa, const Poly& pb, VarId x) {
  Dense ea = evaluate_except(pa, x);
  Dense eb = evaluate_except(pb, x);
  if (ea.size() != static_cast<std::size_t>(pa.degree(x)) + 1) return false;
  if (eb.size() != static_cast<std::size_t>(pb.degree(x)) + 1) return false;
  return dense_gcd_degree(std::move(ea), std::move(eb)) == 0;
}

Poly gcd_impl(Poly a, Poly b) {
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);

  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  Monomial mg = ma.gcd(mb);
  a = a.divide_monomial(ma);
  b = b.divide_monomial(mb);
  Poly mono_part = Poly::term(mg, 1);
  if (a.is_constant() || b.is_constant()) return mono_part;

  if (a.size() > b.size()) std::swap(a, b);
  if (auto q = exact_divide(b, a)) return make_monic(a * mono_part);

  auto va = a.variables();
  auto vb = b.variables();
  // Variables present in only one side contribute only through contents.
  for (VarId v : va) {
    if (!vb.count(v)) return make_monic(gcd_impl(content_in(a, v), b) * mono_part);
  }
  for (VarId v : vb) {
    if (!va.count(v)) return make_monic(gcd_impl(a, content_in(b, v)) * mono_part);
  }
  std::set<VarId> common = va;
  VarId x = pick_main_variable(a, b, common);

  Poly ca = content_in(a, x);
  Poly cb = content_in(b, x);
  Poly c = gcd_impl(ca, cb);
  Poly pa = *exact_divide(a, ca);
  Poly pb = *exact_divide(b, cb);
  if (pa.degree(x) < pb.degree(x)) std::swap(pa, pb);
  if (certainly_coprime(pa, pb, x)) return make_monic(c * mono_part);

  Poly g;
  while (true) {
    Poly r = pseudo_remainder(pa, pb, x);
    if (r.is_zero()) {
      g = pb;
      break;
    }
    if (r.degree(x) == 0) {
      g = Poly(1);
      break;
    }
    pa = std::move(pb);
    pb = *exact_divide(r, content_in(r, x));
  }
  if (!g.is_constant()) g = *exact_divide(g, content_in(g, x));
  return make_monic(g * c * mono_part);
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) { return gcd_impl(a, b); }

}  // namespace kpa::expr
