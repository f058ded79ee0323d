#ifndef KPA_EXPR_EXPR_HPP
#define KPA_EXPR_EXPR_HPP

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kpa/expr/normal.hpp"

namespace kpa::expr {

/// Immutable expression tree. Cheap to copy; nodes are shared.
class Expr {
 public:
  enum class Kind { Const, Symbol, Sum, Product, Power, Apply };
  enum class Func { Exp, Ln, Sqrt, Sinh, Cosh, Abstract };

  Expr();  // zero
  Expr(long c);              // NOLINT(google-explicit-constructor)
  Expr(const Rational& c);   // NOLINT(google-explicit-constructor)

  static Expr symbol(std::string_view name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, int exponent);
  static Expr apply(Func f, std::vector<Expr> args, std::string name = {}, std::vector<int> orders = {});

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] const Rational& value() const;
  [[nodiscard]] const std::string& name() const;
  [[nodiscard]] const std::vector<Expr>& children() const;
  [[nodiscard]] int exponent() const;
  [[nodiscard]] Func func() const;
  [[nodiscard]] const std::vector<int>& orders() const;

  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr exp(const Expr& e);
Expr ln(const Expr& e);
Expr sqrt(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);

/// Canonical rational form of a tree.
Normal to_normal(const Expr& e);
/// Tree whose canonical form is n, laid out in printing order.
Expr from_normal(const Normal& n);
/// from_normal(to_normal(e)); idempotent.
Expr normalize(const Expr& e);

Expr diff(const Expr& e, std::string_view symbol);
/// Simultaneous substitution followed by normalization.
Expr subst(const Expr& e, const std::map<std::string, Expr>& bindings);

/// Replaces the sugar symbols psq and xsq by their component sums.
Normal expand_sugar(const Normal& n);

}  // namespace kpa::expr

#endif  // KPA_EXPR_EXPR_HPP
