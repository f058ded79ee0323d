#include "kpa/expr/expr.hpp"

#include <algorithm>

#include "kpa/expr/errors.hpp"

namespace kpa::expr {

struct Expr::Node {
  Kind kind = Kind::Const;
  Rational value;
  std::string name;
  std::vector<Expr> children;
  int exponent = 1;
  Func func = Func::Abstract;
  std::vector<int> orders;
};

namespace {
const std::shared_ptr<const Expr::Node>& zero_node() {
  static const auto node = std::make_shared<const Expr::Node>();
  return node;
}
}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(long c) : Expr(Rational(c)) {}

Expr::Expr(const Rational& c) {
  auto n = std::make_shared<Node>();
  n->value = c;
  node_ = std::move(n);
}

Expr Expr::symbol(std::string_view name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symbol;
  n->name = std::string(name);
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return Expr();
  if (terms.size() == 1) return terms[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->children = std::move(terms);
  return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return Expr(1);
  if (factors.size() == 1) return factors[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->children = std::move(factors);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  if (exponent == 1) return base;
  if (exponent == 0) return Expr(1);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->children = {std::move(base)};
  n->exponent = exponent;
  return Expr(std::move(n));
}

Expr Expr::apply(Func f, std::vector<Expr> args, std::string name, std::vector<int> orders) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->func = f;
  n->children = std::move(args);
  switch (f) {
    case Func::Exp: n->name = "exp"; break;
    case Func::Ln: n->name = "ln"; break;
    case Func::Sqrt: n->name = "sqrt"; break;
    case Func::Sinh: n->name = "sinh"; break;
    case Func::Cosh: n->name = "cosh"; break;
    case Func::Abstract: n->name = std::move(name); break;
  }
  if (f == Func::Abstract) {
    if (orders.empty()) orders.assign(n->children.size(), 0);
    n->orders = std::move(orders);
  } else if (n->children.size() != 1) {
    throw Error(n->name + " takes exactly one argument");
  }
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::children() const { return node_->children; }
int Expr::exponent() const { return node_->exponent; }
Expr::Func Expr::func() const { return node_->func; }
const std::vector<int>& Expr::orders() const { return node_->orders; }
bool Expr::is_zero() const { return node_->kind == Kind::Const && node_->value == 0; }

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, Expr::power(b, -1)}); }
Expr Expr::operator-() const {
  if (kind() == Kind::Const) return Expr(Rational(-value()));
  return Expr::product({Expr(-1), *this});
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.value == y.value && x.name == y.name && x.exponent == y.exponent &&
         x.func == y.func && x.orders == y.orders && x.children == y.children;
}

Expr exp(const Expr& e) { return Expr::apply(Expr::Func::Exp, {e}); }
Expr ln(const Expr& e) { return Expr::apply(Expr::Func::Ln, {e}); }
Expr sqrt(const Expr& e) { return Expr::apply(Expr::Func::Sqrt, {e}); }
Expr sinh(const Expr& e) { return Expr::apply(Expr::Func::Sinh, {e}); }
Expr cosh(const Expr& e) { return Expr::apply(Expr::Func::Cosh, {e}); }

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Sum: return 1;
    case Expr::Kind::Product: return 2;
    case Expr::Kind::Power: return 3;
    case Expr::Kind::Const: return e.value() < 0 || e.value().get_den() != 1 ? 2 : 4;
    default: return 4;
  }
}

std::string print(const Expr& e);

std::string wrapped(const Expr& e, int min_prec) {
  std::string s = print(e);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string print(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const: {
      const Rational& q = e.value();
      return q.get_den() == 1 ? q.get_num().get_str() : q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    case Expr::Kind::Symbol: return e.name();
    case Expr::Kind::Sum: {
      std::string s;
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        std::string t = print(e.children()[i]);
        if (i == 0) {
          s = t;
        } else if (!t.empty() && t[0] == '-') {
          s += " - " + t.substr(1);
        } else {
          s += " + " + t;
        }
      }
      return s;
    }
    case Expr::Kind::Product: {
      std::string num;
      std::string den;
      bool negative = false;
      for (const auto& f : e.children()) {
        if (f.kind() == Expr::Kind::Const && f.value() == -1) {
          negative = !negative;
          continue;
        }
        if (f.kind() == Expr::Kind::Power && f.exponent() < 0) {
          Expr inv = Expr::power(f.children()[0], -f.exponent());
          den += "/" + wrapped(inv, 4);
          continue;
        }
        std::string t;
        if (f.kind() == Expr::Kind::Const && f.value() < 0) {
          negative = !negative;
          t = print(Expr(Rational(-f.value())));
        } else {
          t = wrapped(f, 3);
        }
        num += (num.empty() ? "" : "*") + t;
      }
      if (num.empty()) num = "1";
      return (negative ? "-" : "") + num + den;
    }
    case Expr::Kind::Power: {
      std::string ex = e.exponent() < 0 ? "(" + std::to_string(e.exponent()) + ")" : std::to_string(e.exponent());
      return wrapped(e.children()[0], 4) + "^" + ex;
    }
    case Expr::Kind::Apply: {
      std::string s;
      if (std::any_of(e.orders().begin(), e.orders().end(), [](int o) { return o != 0; })) {
        s = "D[";
        for (std::size_t i = 0; i < e.orders().size(); ++i) s += (i ? "," : "") + std::to_string(e.orders()[i]);
        s += "]";
      }
      s += e.name() + "(";
      for (std::size_t i = 0; i < e.children().size(); ++i) s += (i ? ", " : "") + print(e.children()[i]);
      return s + ")";
    }
  }
  return {};
}

}  // namespace

std::string Expr::str() const { return print(*this); }

// ---------------------------------------------------------------------------
// Conversion

Normal to_normal(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const: return Normal(e.value());
    case Expr::Kind::Symbol: return Normal::symbol(e.name());
    case Expr::Kind::Sum: {
      Normal s;
      for (const auto& c : e.children()) s += to_normal(c);
      return s;
    }
    case Expr::Kind::Product: {
      Normal p(1);
      for (const auto& c : e.children()) p *= to_normal(c);
      return p;
    }
    case Expr::Kind::Power: return to_normal(e.children()[0]).pow(e.exponent());
    case Expr::Kind::Apply: {
      std::vector<Normal> args;
      args.reserve(e.children().size());
      for (const auto& c : e.children()) args.push_back(to_normal(c));
      switch (e.func()) {
        case Expr::Func::Exp: return exp(args[0]);
        case Expr::Func::Ln: return ln(args[0]);
        case Expr::Func::Sqrt: return sqrt(args[0]);
        case Expr::Func::Sinh: return sinh(args[0]);
        case Expr::Func::Cosh: return cosh(args[0]);
        case Expr::Func::Abstract: return apply(e.name(), std::move(args), e.orders());
      }
    }
  }
  return Normal{};
}

namespace {

Expr var_expr(VarId v) {
  const VarInfo& info = var_info(v);
  std::vector<Expr> args;
  for (const auto& a : info.args) args.push_back(from_normal(a));
  switch (info.kind) {
    case AtomKind::Symbol: return Expr::symbol(info.name);
    case AtomKind::Sqrt: return Expr::apply(Expr::Func::Sqrt, std::move(args));
    case AtomKind::Exp: return Expr::apply(Expr::Func::Exp, std::move(args));
    case AtomKind::Ln: return Expr::apply(Expr::Func::Ln, std::move(args));
    case AtomKind::Function: return Expr::apply(Expr::Func::Abstract, std::move(args), info.name, info.orders);
  }
  return Expr();
}

Expr poly_expr(const Poly& p) {
  std::vector<std::pair<std::vector<std::pair<VarId, int>>, Rational>> terms;
  for (const auto& t : p.terms()) {
    std::vector<std::pair<VarId, int>> f(t.mono.factors().begin(), t.mono.factors().end());
    std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) { return key_less(a.first, b.first); });
    terms.emplace_back(std::move(f), t.coef);
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const auto& x = a.first;
    const auto& y = b.first;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
      if (x[i].first != y[i].first) return key_less(x[i].first, y[i].first);
      if (x[i].second != y[i].second) return x[i].second > y[i].second;
    }
    return x.size() > y.size();
  });
  std::vector<Expr> sum;
  for (const auto& [f, c] : terms) {
    std::vector<Expr> prod;
    if (c != 1 || f.empty()) prod.emplace_back(c);
    for (const auto& [v, k] : f) prod.push_back(Expr::power(var_expr(v), k));
    sum.push_back(Expr::product(std::move(prod)));
  }
  return Expr::sum(std::move(sum));
}

}  // namespace

Expr from_normal(const Normal& n) {
  if (n.den().is_constant()) return poly_expr(n.num());
  return Expr::product({poly_expr(n.num()), Expr::power(poly_expr(n.den()), -1)});
}

Expr normalize(const Expr& e) { return from_normal(to_normal(e)); }

Expr diff(const Expr& e, std::string_view symbol) { return from_normal(diff(to_normal(e), symbol)); }

Expr subst(const Expr& e, const std::map<std::string, Expr>& bindings) {
  std::map<std::string, Normal> nb;
  for (const auto& [k, v] : bindings) nb.emplace(k, to_normal(v));
  return from_normal(subst(to_normal(e), nb));
}

Normal expand_sugar(const Normal& n) {
  static const VarId psq = symbol_id("psq");
  static const VarId xsq = symbol_id("xsq");
  auto syms = n.free_symbols();
  std::map<VarId, Normal> b;
  auto sq = [](const char* s) { return Normal::symbol(s).pow(2); };
  if (syms.count(psq)) b.emplace(psq, sq("p1") + sq("p2") + sq("p3"));
  if (syms.count(xsq)) b.emplace(xsq, sq("x1") + sq("x2") + sq("x3"));
  return b.empty() ? n : subst(n, b);
}

}  // namespace kpa::expr
