#ifndef KPA_EXPR_NORMAL_HPP
#define KPA_EXPR_NORMAL_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kpa/expr/poly.hpp"

namespace kpa::expr {

/// Canonical rational form num/den over Q in symbols and atoms.
///
/// Invariants: den carries no square-root atom, every square-root atom occurs
/// in num with degree at most one, gcd(num, den) = 1, and den is scaled so its
/// leading coefficient under the printing order is 1. Two Normals are equal as
/// values iff they are structurally equal.
class Normal {
 public:
  Normal() = default;
  Normal(long c) : num_(Rational(c)), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)
  Normal(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)

  static Normal symbol(std::string_view name);
  static Normal var(VarId v);
  /// Canonicalizes num/den; den may contain radicals. Throws DivisionByZero.
  static Normal fraction(Poly num, Poly den);

  [[nodiscard]] const Poly& num() const { return num_; }
  [[nodiscard]] const Poly& den() const { return den_; }

  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
  [[nodiscard]] bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  [[nodiscard]] std::optional<Rational> as_rational() const;
  /// Variables occurring directly in num or den.
  [[nodiscard]] std::set<VarId> variables() const;
  /// Symbols reachable through atoms as well.
  [[nodiscard]] std::set<VarId> free_symbols() const;
  [[nodiscard]] bool depends_on(VarId symbol) const;
  [[nodiscard]] std::size_t size() const { return num_.size() + den_.size(); }

  Normal operator-() const;
  friend Normal operator+(const Normal& a, const Normal& b);
  friend Normal operator-(const Normal& a, const Normal& b);
  friend Normal operator*(const Normal& a, const Normal& b);
  friend Normal operator/(const Normal& a, const Normal& b);
  Normal& operator+=(const Normal& o) { return *this = *this + o; }
  Normal& operator-=(const Normal& o) { return *this = *this - o; }
  Normal& operator*=(const Normal& o) { return *this = *this * o; }
  Normal& operator/=(const Normal& o) { return *this = *this / o; }
  [[nodiscard]] Normal pow(int n) const;
  [[nodiscard]] Normal inverse() const;

  friend bool operator==(const Normal& a, const Normal& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Normal& a, const Normal& b) { return !(a == b); }

  /// Deterministic printed form; parseable when no abstract derivative atoms occur.
  [[nodiscard]] std::string str() const;

 private:
  Poly num_;
  Poly den_{Rational(1)};
};

enum class AtomKind { Symbol, Sqrt, Exp, Ln, Function };

/// Everything known about a variable of the polynomial ring.
struct VarInfo {
  VarId id = 0;
  AtomKind kind = AtomKind::Symbol;
  std::string key;   // canonical printed form; identity of the variable
  std::string name;  // symbol or function name
  std::vector<Normal> args;
  std::vector<int> orders;  // partial-derivative orders for abstract functions
  std::set<VarId> symbols;  // free symbols reachable from this variable
};

/// Process-wide interning table for symbols and atoms. Thread-safe.
class Registry {
 public:
  static Registry& instance();
  VarId symbol(std::string_view name);
  [[nodiscard]] std::optional<VarId> find_symbol(std::string_view name) const;
  VarId atom(AtomKind kind, std::string name, std::vector<Normal> args, std::vector<int> orders);
  [[nodiscard]] const VarInfo& info(VarId v) const;

 private:
  Registry() = default;
  struct Impl;
  Impl& impl() const;
};

inline const VarInfo& var_info(VarId v) { return Registry::instance().info(v); }
inline VarId symbol_id(std::string_view name) { return Registry::instance().symbol(name); }

/// Printing/normalization order of variables: symbols first, then by key.
bool key_less(VarId a, VarId b);

// Atom constructors; each applies its simplification rules before interning.
Normal sqrt(const Normal& radicand);
Normal exp(const Normal& argument);
Normal ln(const Normal& argument);
Normal sinh(const Normal& argument);
Normal cosh(const Normal& argument);
/// Abstract function application, optionally a partial derivative of it.
Normal apply(const std::string& name, std::vector<Normal> args, std::vector<int> orders = {});

/// Exact partial derivative with respect to a symbol.
Normal diff(const Normal& e, VarId symbol);
Normal diff(const Normal& e, std::string_view symbol);

/// Simultaneous substitution of symbols.
Normal subst(const Normal& e, const std::map<VarId, Normal>& bindings);
Normal subst(const Normal& e, const std::map<std::string, Normal>& bindings);

/// Polynomial square root when p is a perfect square.
std::optional<Poly> poly_sqrt(const Poly& p);

}  // namespace kpa::expr

#endif  // KPA_EXPR_NORMAL_HPP
