#ifndef KPA_EXPR_POLY_HPP
#define KPA_EXPR_POLY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kpa::expr {

using VarId = std::uint32_t;
using Rational = mpq_class;

/// Power product of variables with positive exponents, kept sorted by VarId.
class Monomial {
 public:
  using Factor = std::pair<VarId, int>;

  Monomial() = default;
  static Monomial of(VarId v, int exp = 1);

  [[nodiscard]] bool is_one() const { return factors_.empty(); }
  [[nodiscard]] int degree(VarId v) const;
  [[nodiscard]] int total_degree() const;
  [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }

  [[nodiscard]] Monomial operator*(const Monomial& other) const;
  /// Returns this / other if other divides this.
  [[nodiscard]] std::optional<Monomial> divide(const Monomial& other) const;
  [[nodiscard]] Monomial without(VarId v) const;
  [[nodiscard]] Monomial gcd(const Monomial& other) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  [[nodiscard]] std::size_t hash() const;

 private:
  std::vector<Factor> factors_;
  friend class Poly;
};

/// Lexicographic order with lower VarId ranking as the bigger variable.
int lex_compare(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coef;
};

/// Sparse multivariate polynomial over Q. Terms are sorted by descending lex
/// order, combined, and carry nonzero coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Rational& c);
  explicit Poly(long c) : Poly(Rational(c)) {}
  static Poly variable(VarId v, int exp = 1);
  static Poly term(const Monomial& m, const Rational& c);

  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] Rational constant_value() const;
  [[nodiscard]] bool is_monomial() const { return terms_.size() == 1; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] const Term& leading() const { return terms_.front(); }

  [[nodiscard]] bool contains(VarId v) const;
  [[nodiscard]] std::set<VarId> variables() const;
  [[nodiscard]] int degree(VarId v) const;
  /// Coefficients c_k of v^k, index k in [0, degree].
  [[nodiscard]] std::vector<Poly> coefficients(VarId v) const;
  [[nodiscard]] Poly derivative(VarId v) const;
  /// Largest monomial dividing every term.
  [[nodiscard]] Monomial monomial_content() const;
  [[nodiscard]] Poly divide_monomial(const Monomial& m) const;
  [[nodiscard]] Poly multiply_monomial(const Monomial& m, const Rational& c) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  Poly operator-() const;
  [[nodiscard]] Poly pow(unsigned n) const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Builds from unsorted, possibly duplicated terms.
  static Poly from_terms(std::vector<Term> terms);
  /// Takes terms already sorted, combined and nonzero.
  static Poly from_sorted_terms(std::vector<Term> terms);

 private:
  std::vector<Term> terms_;
};

/// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<Poly> exact_divide(const Poly& a, const Poly& b);

/// Greatest common divisor, scaled so its lex-leading coefficient is 1.
/// The gcd with zero is the other argument (scaled); gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);

/// Sparse pseudo-remainder of a by b with respect to v (b must contain v).
Poly pseudo_remainder(const Poly& a, const Poly& b, VarId v);

/// Thrown when an intermediate polynomial exceeds the configured term budget.
class BudgetExceeded : public std::exception {
 public:
  [[nodiscard]] const char* what() const noexcept override {
    return "polynomial size budget exceeded";
  }
};

/// Per-thread cap on polynomial sizes during multiplication; 0 disables it.
void set_term_budget(std::size_t terms);
std::size_t term_budget();

}  // namespace kpa::expr

#endif  // KPA_EXPR_POLY_HPP
