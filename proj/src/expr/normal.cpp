#include "kpa/expr/normal.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <stdexcept>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "kpa/expr/errors.hpp"
#include "kpa/expr/eval.hpp"

namespace kpa::expr {

// ---------------------------------------------------------------------------
// Registry

// Lookups by id are lock-free: entries are published into fixed chunks that
// never move, so info() sits on every hot path without contention.
struct Registry::Impl {
  static constexpr std::size_t kChunkBits = 12;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kChunks = 4096;
  using Slot = std::atomic<const VarInfo*>;

  mutable std::shared_mutex mutex;
  std::vector<std::unique_ptr<VarInfo>> vars;
  std::unordered_map<std::string, VarId> by_key;
  std::array<std::atomic<Slot*>, kChunks> chunks{};
  std::vector<std::unique_ptr<Slot[]>> owned;

  // Caller holds the unique lock.
  VarId publish(std::unique_ptr<VarInfo> info) {
    const std::size_t idx = vars.size();
    const std::size_t c = idx >> kChunkBits;
    if (c >= kChunks) throw Error("symbol registry exhausted");
    if (!chunks[c].load(std::memory_order_relaxed)) {
      owned.push_back(std::make_unique<Slot[]>(kChunkSize));
      chunks[c].store(owned.back().get(), std::memory_order_release);
    }
    info->id = static_cast<VarId>(idx);
    chunks[c].load(std::memory_order_relaxed)[idx & (kChunkSize - 1)].store(info.get(), std::memory_order_release);
    by_key.emplace(info->key, info->id);
    vars.push_back(std::move(info));
    return static_cast<VarId>(idx);
  }
};

Registry::Impl& Registry::impl() const {
  static Impl impl;
  return impl;
}

Registry& Registry::instance() {
  static Registry registry;
  return registry;
}

VarId Registry::symbol(std::string_view name) {
  Impl* im = &impl();
  std::string key(name);
  {
    std::shared_lock lock(im->mutex);
    auto it = im->by_key.find(key);
    if (it != im->by_key.end()) return it->second;
  }
  std::unique_lock lock(im->mutex);
  auto it = im->by_key.find(key);
  if (it != im->by_key.end()) return it->second;
  auto info = std::make_unique<VarInfo>();
  info->kind = AtomKind::Symbol;
  info->key = key;
  info->name = key;
  info->symbols = {static_cast<VarId>(im->vars.size())};
  return im->publish(std::move(info));
}

std::optional<VarId> Registry::find_symbol(std::string_view name) const {
  Impl* im = &impl();
  std::shared_lock lock(im->mutex);
  auto it = im->by_key.find(std::string(name));
  if (it == im->by_key.end()) return std::nullopt;
  return it->second;
}

namespace {
std::string atom_key(AtomKind kind, const std::string& name, const std::vector<Normal>& args,
                     const std::vector<int>& orders) {
  std::string key;
  switch (kind) {
    case AtomKind::Sqrt: key = "sqrt"; break;
    case AtomKind::Exp: key = "exp"; break;
    case AtomKind::Ln: key = "ln"; break;
    case AtomKind::Function: {
      bool any = std::any_of(orders.begin(), orders.end(), [](int o) { return o != 0; });
      if (any) {
        key = "D[";
        for (std::size_t i = 0; i < orders.size(); ++i) {
          if (i) key += ",";
          key += std::to_string(orders[i]);
        }
        key += "]";
      }
      key += name;
      break;
    }
    case AtomKind::Symbol: return name;
  }
  key += "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) key += ", ";
    key += args[i].str();
  }
  key += ")";
  return key;
}
}  // namespace

VarId Registry::atom(AtomKind kind, std::string name, std::vector<Normal> args,
                     std::vector<int> orders) {
  std::string key = atom_key(kind, name, args, orders);
  Impl* im = &impl();
  {
    std::shared_lock lock(im->mutex);
    auto it = im->by_key.find(key);
    if (it != im->by_key.end()) return it->second;
  }
  std::set<VarId> symbols;
  for (const auto& a : args) {
    auto s = a.free_symbols();
    symbols.insert(s.begin(), s.end());
  }
  std::unique_lock lock(im->mutex);
  auto it = im->by_key.find(key);
  if (it != im->by_key.end()) return it->second;
  auto info = std::make_unique<VarInfo>();
  info->kind = kind;
  info->key = std::move(key);
  info->name = std::move(name);
  info->args = std::move(args);
  info->orders = std::move(orders);
  info->symbols = std::move(symbols);
  return im->publish(std::move(info));
}

const VarInfo& Registry::info(VarId v) const {
  const Impl& im = impl();
  const auto idx = static_cast<std::size_t>(v);
  const Impl::Slot* chunk =
      (idx >> Impl::kChunkBits) < Impl::kChunks ? im.chunks[idx >> Impl::kChunkBits].load(std::memory_order_acquire)
                                                : nullptr;
  const VarInfo* info = chunk ? chunk[idx & (Impl::kChunkSize - 1)].load(std::memory_order_acquire) : nullptr;
  if (!info) throw std::out_of_range("unknown variable id " + std::to_string(v));
  return *info;
}

bool key_less(VarId a, VarId b) {
  if (a == b) return false;
  const auto& ia = var_info(a);
  const auto& ib = var_info(b);
  bool sa = ia.kind == AtomKind::Symbol;
  bool sb = ib.kind == AtomKind::Symbol;
  if (sa != sb) return sa;
  return ia.key < ib.key;
}

// ---------------------------------------------------------------------------
// Printing order helpers

namespace {

using KeyedMonomial = std::vector<std::pair<VarId, int>>;

KeyedMonomial keyed(const Monomial& m) {
  KeyedMonomial k(m.factors().begin(), m.factors().end());
  std::sort(k.begin(), k.end(), [](const auto& x, const auto& y) { return key_less(x.first, y.first); });
  return k;
}

/// Lex comparison under the key order; > 0 when a ranks first.
int key_compare(const KeyedMonomial& a, const KeyedMonomial& b) {
  std::size_t i = 0;
  for (; i < a.size() && i < b.size(); ++i) {
    if (a[i].first != b[i].first) return key_less(a[i].first, b[i].first) ? 1 : -1;
    if (a[i].second != b[i].second) return a[i].second > b[i].second ? 1 : -1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() > b.size() ? 1 : -1;
}

std::vector<std::pair<KeyedMonomial, Rational>> print_order(const Poly& p) {
  std::vector<std::pair<KeyedMonomial, Rational>> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.emplace_back(keyed(t.mono), t.coef);
  std::sort(terms.begin(), terms.end(),
            [](const auto& x, const auto& y) { return key_compare(x.first, y.first) > 0; });
  return terms;
}

Rational key_leading_coefficient(const Poly& p) {
  const Term* best = nullptr;
  KeyedMonomial best_key;
  for (const auto& t : p.terms()) {
    auto k = keyed(t.mono);
    if (!best || key_compare(k, best_key) > 0) {
      best = &t;
      best_key = std::move(k);
    }
  }
  return best ? best->coef : Rational(1);
}

bool has_sqrt_var(const Poly& p, int min_degree, VarId* which) {
  bool found = false;
  VarId best = 0;
  for (VarId v : p.variables()) {
    if (var_info(v).kind != AtomKind::Sqrt) continue;
    if (p.degree(v) < min_degree) continue;
    if (!found || v > best) {
      best = v;
      found = true;
    }
  }
  if (found && which) *which = best;
  return found;
}

/// Replaces w^2 by its radicand until every radical has degree <= 1.
/// Returns (numerator, radical-free denominator).
std::pair<Poly, Poly> reduce_radicals(Poly p) {
  Poly den(1);
  VarId w = 0;
  while (has_sqrt_var(p, 2, &w)) {
    const Normal& r = var_info(w).args.at(0);
    auto cs = p.coefficients(w);
    const std::size_t top = (cs.size() - 1) / 2;
    std::vector<Poly> rn_pow{Poly(1)};
    std::vector<Poly> rd_pow{Poly(1)};
    for (std::size_t j = 1; j <= top; ++j) {
      rn_pow.push_back(rn_pow.back() * r.num());
      rd_pow.push_back(rd_pow.back() * r.den());
    }
    Poly out;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (cs[k].is_zero()) continue;
      std::size_t j = k / 2;
      Poly t = cs[k] * rn_pow[j] * rd_pow[top - j];
      if (k % 2 == 1) t = t.multiply_monomial(Monomial::of(w), 1);
      out += t;
    }
    p = std::move(out);
    den = den * rd_pow[top];
  }
  return {std::move(p), std::move(den)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Normal

Normal Normal::symbol(std::string_view name) { return var(symbol_id(name)); }

Normal Normal::var(VarId v) {
  Normal n;
  n.num_ = Poly::variable(v);
  n.den_ = Poly(1);
  return n;
}

namespace {
void finish(Poly& num, Poly& den) {
  if (num.is_zero()) {
    den = Poly(1);
    return;
  }
  Rational lc = key_leading_coefficient(den);
  if (lc != 1) {
    Rational inv = 1 / lc;
    num *= inv;
    den *= inv;
  }
}

void cancel(Poly& num, Poly& den) {
  if (den.is_constant()) return;
  Poly g = gcd(num, den);
  if (!g.is_constant()) {
    num = *exact_divide(num, g);
    den = *exact_divide(den, g);
  }
}
}  // namespace

Normal Normal::fraction(Poly num, Poly den) {
  if (den.is_zero()) throw DivisionByZero("division by an identically zero expression");
  Normal n;
  if (num.is_zero()) return n;

  // Rationalize the denominator, highest radical first.
  {
    auto [dn, dq] = reduce_radicals(std::move(den));
    num = num * dq;
    den = std::move(dn);
  }
  VarId w = 0;
  while (has_sqrt_var(den, 1, &w)) {
    auto cs = den.coefficients(w);
    Poly conj = cs[0] - cs[1].multiply_monomial(Monomial::of(w), 1);
    num = num * conj;
    auto [dn, dq] = reduce_radicals(den * conj);
    num = num * dq;
    den = std::move(dn);
    if (den.is_zero()) throw DivisionByZero("radical denominator vanishes identically");
  }
  {
    auto [nn, nq] = reduce_radicals(std::move(num));
    num = std::move(nn);
    den = den * nq;
  }
  cancel(num, den);
  finish(num, den);
  n.num_ = std::move(num);
  n.den_ = std::move(den);
  return n;
}

std::optional<Rational> Normal::as_rational() const {
  if (!is_constant()) return std::nullopt;
  return num_.constant_value() / den_.constant_value();
}

std::set<VarId> Normal::variables() const {
  auto v = num_.variables();
  auto d = den_.variables();
  v.insert(d.begin(), d.end());
  return v;
}

std::set<VarId> Normal::free_symbols() const {
  std::set<VarId> out;
  for (VarId v : variables()) {
    const auto& s = var_info(v).symbols;
    out.insert(s.begin(), s.end());
  }
  return out;
}

bool Normal::depends_on(VarId symbol) const {
  for (VarId v : variables())
    if (var_info(v).symbols.count(symbol)) return true;
  return false;
}

Normal Normal::operator-() const {
  Normal n = *this;
  n.num_ = -n.num_;
  return n;
}

Normal operator+(const Normal& a, const Normal& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Normal r;
  if (a.den_ == b.den_) {
    r.num_ = a.num_ + b.num_;
    r.den_ = a.den_;
    if (r.num_.is_zero()) return Normal{};
    cancel(r.num_, r.den_);
    finish(r.num_, r.den_);
    return r;
  }
  Poly g = gcd(a.den_, b.den_);
  Poly ad = *exact_divide(a.den_, g);
  Poly bd = *exact_divide(b.den_, g);
  r.num_ = a.num_ * bd + b.num_ * ad;
  if (r.num_.is_zero()) return Normal{};
  r.den_ = a.den_ * bd;
  if (!g.is_constant()) {
    Poly h = gcd(r.num_, g);
    if (!h.is_constant()) {
      r.num_ = *exact_divide(r.num_, h);
      r.den_ = *exact_divide(r.den_, h);
    }
  }
  finish(r.num_, r.den_);
  return r;
}

Normal operator-(const Normal& a, const Normal& b) { return a + (-b); }

Normal operator*(const Normal& a, const Normal& b) {
  if (a.is_zero() || b.is_zero()) return Normal{};
  if (a.is_constant() && a.den_.is_constant()) {
    if (auto c = a.as_rational(); c && *c == 1) return b;
  }
  if (b.is_constant()) {
    if (auto c = b.as_rational(); c && *c == 1) return a;
  }
  Poly g1 = gcd(a.num_, b.den_);
  Poly g2 = gcd(b.num_, a.den_);
  Poly an = g1.is_constant() ? a.num_ : *exact_divide(a.num_, g1);
  Poly bd = g1.is_constant() ? b.den_ : *exact_divide(b.den_, g1);
  Poly bn = g2.is_constant() ? b.num_ : *exact_divide(b.num_, g2);
  Poly ad = g2.is_constant() ? a.den_ : *exact_divide(a.den_, g2);
  Poly num = an * bn;
  Poly den = ad * bd;
  if (has_sqrt_var(num, 2, nullptr)) return Normal::fraction(std::move(num), std::move(den));
  Normal r;
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  finish(r.num_, r.den_);
  return r;
}

Normal Normal::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  return fraction(den_, num_);
}

Normal operator/(const Normal& a, const Normal& b) {
  if (b.is_zero()) throw DivisionByZero("division by an identically zero expression");
  if (a.is_zero()) return Normal{};
  return a * b.inverse();
}

Normal Normal::pow(int n) const {
  if (n == 0) return Normal(1);
  if (n < 0) return inverse().pow(-n);
  Normal result(1);
  Normal base = *this;
  auto e = static_cast<unsigned>(n);
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string monomial_str(const KeyedMonomial& m) {
  std::string s;
  for (const auto& [v, e] : m) {
    if (!s.empty()) s += "*";
    s += var_info(v).key;
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

/// Prints one term body for |coefficient| = num/den (den folded into the divisor list).
std::string term_body(const KeyedMonomial& m, const mpz_class& num) {
  if (m.empty()) return num.get_str();
  std::string ms = monomial_str(m);
  return num == 1 ? ms : num.get_str() + "*" + ms;
}

std::string poly_str(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : print_order(p)) {
    mpz_class n = abs(c.get_num());
    std::string body = term_body(m, n);
    if (c.get_den() != 1) body += "/" + c.get_den().get_str();
    if (first) {
      s += (c < 0 ? "-" : "") + body;
      first = false;
    } else {
      s += (c < 0 ? " - " : " + ") + body;
    }
  }
  return s;
}

bool is_single_factor(const Poly& p) {
  return p.is_monomial() && p.leading().coef == 1 && p.leading().mono.factors().size() == 1;
}

}  // namespace

std::string Normal::str() const {
  if (den_.is_constant()) return poly_str(num_);  // den is 1 by invariant
  std::string den_s;
  if (num_.is_monomial()) {
    const auto& t = num_.leading();
    const Rational& c = t.coef;
    auto m = keyed(t.mono);
    std::string body = term_body(m, abs(c.get_num()));
    std::string d;
    if (den_.is_monomial() && den_.leading().coef == 1) {
      d = monomial_str(keyed(den_.leading().mono));
      if (c.get_den() != 1) d = c.get_den().get_str() + "*" + d;
      if (c.get_den() != 1 || !is_single_factor(den_)) d = "(" + d + ")";
    } else {
      d = "(" + poly_str(den_) + ")";
      if (c.get_den() != 1) d = "(" + c.get_den().get_str() + "*" + d + ")";
    }
    return (c < 0 ? "-" : "") + body + "/" + d;
  }
  std::string n = "(" + poly_str(num_) + ")";
  if (is_single_factor(den_)) return n + "/" + poly_str(den_);
  return n + "/(" + poly_str(den_) + ")";
}

// ---------------------------------------------------------------------------
// Atoms

namespace {

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  mpz_class n = q.get_num();
  mpz_class d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(rn, rd);
}

}  // namespace

std::optional<Poly> poly_sqrt(const Poly& p) {
  if (p.is_zero()) return Poly{};
  const Term& lt = p.leading();
  auto c = rational_sqrt(lt.coef);
  if (!c) return std::nullopt;
  std::vector<Term> root_terms;
  Monomial half;
  for (const auto& [v, e] : lt.mono.factors()) {
    if (e % 2 != 0) return std::nullopt;
    half = half * Monomial::of(v, e / 2);
  }
  Poly root = Poly::term(half, *c);
  const Term root_lead = root.leading();
  Poly rem = p - root * root;
  std::size_t guard = 4 * p.size() + 16;
  while (!rem.is_zero()) {
    if (guard-- == 0) return std::nullopt;
    const Term& lr = rem.leading();
    auto q = lr.mono.divide(root_lead.mono);
    if (!q) return std::nullopt;
    Poly t = Poly::term(*q, lr.coef / (2 * root_lead.coef));
    // Terms must stay below the leading term of the root.
    if (lex_compare(*q, root_lead.mono) >= 0) return std::nullopt;
    rem -= (root * t) * Rational(2) + t * t;
    root += t;
  }
  return root;
}

namespace {

/// Splits n = s^2 * t with t free of small square factors.
std::pair<mpz_class, mpz_class> square_split(mpz_class n) {
  mpz_class s = 1;
  for (unsigned long d = 2; d <= 10000 && d * d <= n; ++d) {
    mpz_class dd = d * d;
    while (mpz_divisible_p(n.get_mpz_t(), dd.get_mpz_t())) {
      n /= dd;
      s *= d;
    }
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    s *= r;
    n = 1;
  }
  return {s, n};
}

Rational rational_content(const Poly& p) {
  mpz_class g = 0;
  mpz_class l = 1;
  for (const auto& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den().get_mpz_t());
  }
  return Rational(g, l);
}

bool positive_parameter_monomial(const Poly& p) {
  static const std::set<std::string> positive{"kappa", "kappabar", "m"};
  if (!p.is_monomial() || p.leading().coef <= 0) return false;
  for (const auto& [v, e] : p.leading().mono.factors())
    if (!positive.count(var_info(v).key) || var_info(v).kind != AtomKind::Symbol) return false;
  return true;
}

}  // namespace

Normal sqrt(const Normal& r) {
  if (r.is_zero()) return Normal{};
  if (auto q = r.as_rational()) {
    if (*q < 0) throw DomainError("square root of negative constant " + r.str());
    if (auto s = rational_sqrt(*q)) return Normal(*s);
  }
  auto sn = poly_sqrt(r.num());
  auto sd = sn ? poly_sqrt(r.den()) : std::nullopt;
  if (sn && sd) {
    Normal root = Normal::fraction(*sn, *sd);
    // Positive branch, decided at the reference point.
    if (reference_value(root) < 0) root = -root;
    return root;
  }
  // r = (a/b) * N' / D' with N' primitive; sqrt(a/b) = sqrt(a*b)/b.
  Rational c = rational_content(r.num());
  Poly inner = r.num() * Rational(1 / c);
  auto [s, t] = square_split(c.get_num() * c.get_den());
  Rational outer_coef(s, c.get_den());
  outer_coef.canonicalize();
  Normal outer(outer_coef);
  Poly den = r.den();
  if (!den.is_constant()) {
    auto dr = poly_sqrt(den);
    if (dr && dr->leading().coef < 0) *dr = -*dr;
    if (dr && positive_parameter_monomial(*dr)) {
      outer = outer / Normal::fraction(*dr, Poly(1));
      den = Poly(1);
    }
  }
  Normal radicand = Normal::fraction(inner * Rational(t), den);
  if (auto q = radicand.as_rational()) {
    if (auto root = rational_sqrt(*q)) return outer * Normal(*root);
  }
  return outer * Normal::var(Registry::instance().atom(AtomKind::Sqrt, "sqrt", {radicand}, {}));
}

Normal exp(const Normal& u) {
  if (u.is_zero()) return Normal(1);
  Normal result(1);
  std::map<VarId, long> powers;
  const bool unit_den = u.den().is_constant();
  const Monomial den_content = u.den().monomial_content();
  for (const auto& t : u.num().terms()) {
    if (unit_den && t.mono.factors().size() == 1 && t.mono.factors()[0].second == 1 &&
        var_info(t.mono.factors()[0].first).kind == AtomKind::Ln) {
      const Normal& arg = var_info(t.mono.factors()[0].first).args.at(0);
      if (t.coef.get_den() == 1) {
        result = result * arg.pow(static_cast<int>(t.coef.get_num().get_si()));
        continue;
      }
      if (t.coef.get_den() == 2) {
        result = result * sqrt(arg).pow(static_cast<int>(t.coef.get_num().get_si()));
        continue;
      }
    }
    Monomial g = t.mono.gcd(den_content);
    Poly mono_num = Poly::term(*t.mono.divide(g), 1);
    Poly reduced_den = u.den().divide_monomial(g) * Rational(t.coef.get_den());
    Normal key_arg = Normal::fraction(mono_num, reduced_den);
    VarId atom = Registry::instance().atom(AtomKind::Exp, "exp", {key_arg}, {});
    powers[atom] += t.coef.get_num().get_si();
  }
  for (const auto& [atom, k] : powers) {
    if (k != 0) result = result * Normal::var(atom).pow(static_cast<int>(k));
  }
  return result;
}

Normal ln(const Normal& u) {
  if (u.is_zero()) throw DomainError("logarithm of zero");
  if (auto q = u.as_rational()) {
    if (*q == 1) return Normal{};
    if (*q < 0) throw DomainError("logarithm of negative constant " + u.str());
  }
  // Products of exponential atoms collapse to their exponents.
  if (u.num().is_monomial() && u.den().is_monomial() && u.num().leading().coef == 1 &&
      u.den().leading().coef == 1) {
    bool all_exp = true;
    for (const auto& [v, e] : u.num().leading().mono.factors())
      all_exp = all_exp && var_info(v).kind == AtomKind::Exp;
    for (const auto& [v, e] : u.den().leading().mono.factors())
      all_exp = all_exp && var_info(v).kind == AtomKind::Exp;
    if (all_exp) {
      Normal sum;
      for (const auto& [v, e] : u.num().leading().mono.factors())
        sum = sum + var_info(v).args[0] * Normal(static_cast<long>(e));
      for (const auto& [v, e] : u.den().leading().mono.factors())
        sum = sum - var_info(v).args[0] * Normal(static_cast<long>(e));
      return sum;
    }
  }
  return Normal::var(Registry::instance().atom(AtomKind::Ln, "ln", {u}, {}));
}

Normal sinh(const Normal& u) {
  Normal e = exp(u);
  return (e - e.inverse()) * Normal(Rational(1, 2));
}

Normal cosh(const Normal& u) {
  Normal e = exp(u);
  return (e + e.inverse()) * Normal(Rational(1, 2));
}

Normal apply(const std::string& name, std::vector<Normal> args, std::vector<int> orders) {
  if (orders.empty()) orders.assign(args.size(), 0);
  if (orders.size() != args.size()) throw Error("derivative orders do not match arguments of " + name);
  return Normal::var(Registry::instance().atom(AtomKind::Function, name, std::move(args), std::move(orders)));
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

struct DerivCache {
  std::shared_mutex mutex;
  std::map<std::pair<VarId, VarId>, Normal> values;
};

DerivCache& deriv_cache() {
  static DerivCache cache;
  return cache;
}

Normal var_derivative(VarId v, VarId s) {
  const VarInfo& info = var_info(v);
  if (info.kind == AtomKind::Symbol) return v == s ? Normal(1) : Normal{};
  if (!info.symbols.count(s)) return Normal{};
  auto& cache = deriv_cache();
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.values.find({v, s});
    if (it != cache.values.end()) return it->second;
  }
  Normal d;
  switch (info.kind) {
    case AtomKind::Sqrt: {
      const Normal& r = info.args[0];
      d = diff(r, s) * Normal::var(v) / (r * Normal(2));
      break;
    }
    case AtomKind::Exp:
      d = Normal::var(v) * diff(info.args[0], s);
      break;
    case AtomKind::Ln:
      d = diff(info.args[0], s) / info.args[0];
      break;
    case AtomKind::Function:
      for (std::size_t k = 0; k < info.args.size(); ++k) {
        Normal dk = diff(info.args[k], s);
        if (dk.is_zero()) continue;
        auto orders = info.orders;
        ++orders[k];
        d = d + apply(info.name, info.args, orders) * dk;
      }
      break;
    case AtomKind::Symbol:
      break;
  }
  std::unique_lock lock(cache.mutex);
  cache.values.emplace(std::make_pair(v, s), d);
  return d;
}

Normal poly_total_derivative(const Poly& p, VarId s) {
  Normal out;
  for (VarId v : p.variables()) {
    Normal dv = var_derivative(v, s);
    if (dv.is_zero()) continue;
    out = out + Normal::fraction(p.derivative(v), Poly(1)) * dv;
  }
  return out;
}

}  // namespace

Normal diff(const Normal& e, VarId s) {
  if (!e.depends_on(s)) return Normal{};
  Normal dn = poly_total_derivative(e.num(), s);
  if (e.den().is_constant()) return dn;  // den is 1
  Normal dd = poly_total_derivative(e.den(), s);
  Normal den = Normal::fraction(e.den(), Poly(1));
  if (dd.is_zero()) return dn / den;
  Normal num = Normal::fraction(e.num(), Poly(1));
  return (dn * den - num * dd) / (den * den);
}

Normal diff(const Normal& e, std::string_view s) { return diff(e, symbol_id(s)); }

// ---------------------------------------------------------------------------
// Substitution

namespace {

class Substituter {
 public:
  explicit Substituter(const std::map<VarId, Normal>& bindings) : bindings_(bindings) {
    for (const auto& [k, v] : bindings) keys_.insert(k);
  }

  Normal run(const Normal& e) {
    bool touched = false;
    for (VarId v : e.variables()) touched = touched || affected(v);
    if (!touched) return e;
    auto [nn, nd] = expand(e.num());
    auto [dn, dd] = expand(e.den());
    return Normal::fraction(nn * dd, nd * dn);
  }

 private:
  bool affected(VarId v) const {
    const auto& s = var_info(v).symbols;
    return std::any_of(s.begin(), s.end(), [this](VarId x) { return keys_.count(x) > 0; });
  }

  const Normal& value(VarId v) {
    auto it = memo_.find(v);
    if (it != memo_.end()) return it->second;
    Normal val;
    const VarInfo& info = var_info(v);
    auto b = bindings_.find(v);
    if (b != bindings_.end()) {
      val = b->second;
    } else if (!affected(v)) {
      val = Normal::var(v);
    } else {
      std::vector<Normal> args;
      for (const auto& a : info.args) args.push_back(run(a));
      switch (info.kind) {
        case AtomKind::Sqrt: val = sqrt(args[0]); break;
        case AtomKind::Exp: val = exp(args[0]); break;
        case AtomKind::Ln: val = ln(args[0]); break;
        case AtomKind::Function: val = apply(info.name, args, info.orders); break;
        case AtomKind::Symbol: val = Normal::var(v); break;
      }
    }
    return memo_.emplace(v, std::move(val)).first->second;
  }

  /// Evaluates a polynomial over the substituted values as num/den Polys.
  std::pair<Poly, Poly> expand(const Poly& p) {
    std::map<VarId, int> max_exp;
    for (const auto& t : p.terms())
      for (const auto& [v, e] : t.mono.factors()) max_exp[v] = std::max(max_exp[v], e);
    std::map<VarId, std::vector<Poly>> num_pows;
    std::map<VarId, std::vector<Poly>> den_pows;
    Poly common(1);
    for (const auto& [v, e] : max_exp) {
      const Normal& val = value(v);
      auto& np = num_pows[v];
      auto& dp = den_pows[v];
      np = {Poly(1)};
      dp = {Poly(1)};
      for (int k = 1; k <= e; ++k) {
        np.push_back(np.back() * val.num());
        dp.push_back(dp.back() * val.den());
      }
      common = common * dp.back();
    }
    Poly out;
    for (const auto& t : p.terms()) {
      Poly term(t.coef);
      for (const auto& [v, e] : max_exp) {
        int k = t.mono.degree(v);
        term = term * num_pows[v][static_cast<std::size_t>(k)] * den_pows[v][static_cast<std::size_t>(e - k)];
      }
      out += term;
    }
    return {std::move(out), std::move(common)};
  }

  const std::map<VarId, Normal>& bindings_;
  std::set<VarId> keys_;
  std::map<VarId, Normal> memo_;
};

void check_acyclic(const std::map<VarId, Normal>& bindings) {
  // Simultaneous substitution never recurses into its own output, so the only
  // rejected shape is a binding chain that a caller would need to iterate.
  std::map<VarId, std::set<VarId>> deps;
  for (const auto& [k, v] : bindings) {
    for (VarId s : v.free_symbols())
      if (bindings.count(s)) deps[k].insert(s);
  }
  std::map<VarId, int> state;
  std::function<void(VarId)> visit = [&](VarId x) {
    state[x] = 1;
    for (VarId y : deps[x]) {
      if (state[y] == 1) throw CyclicBinding("cyclic substitution involving " + var_info(y).key);
      if (state[y] == 0) visit(y);
    }
    state[x] = 2;
  };
  for (const auto& [k, v] : bindings)
    if (state[k] == 0) visit(k);
}

}  // namespace

Normal subst(const Normal& e, const std::map<VarId, Normal>& bindings) {
  // Identity bindings x -> x are no-ops, not cycles.
  std::map<VarId, Normal> live;
  for (const auto& [k, v] : bindings)
    if (!(v == Normal::var(k))) live.emplace(k, v);
  if (live.empty()) return e;
  check_acyclic(live);
  Substituter s(live);
  return s.run(e);
}

Normal subst(const Normal& e, const std::map<std::string, Normal>& bindings) {
  std::map<VarId, Normal> ids;
  for (const auto& [k, v] : bindings) ids.emplace(symbol_id(k), v);
  return subst(e, ids);
}

}  // namespace kpa::expr
