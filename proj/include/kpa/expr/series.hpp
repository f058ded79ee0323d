#ifndef KPA_EXPR_SERIES_HPP
#define KPA_EXPR_SERIES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kpa/expr/expr.hpp"
#include "kpa/expr/normal.hpp"

namespace kpa::expr {

/// Truncated Taylor expansion of an expression in one symbol.
///
/// For a finite center c the expansion parameter is eps = var - c; for
/// center = infinity it is eps = 1/var.
struct SeriesPoly {
  std::string variable;
  std::optional<Rational> center;  // nullopt: expansion at infinity
  int order = 0;
  std::vector<Normal> coefficients;  // coefficient of eps^k, k = 0..order

  [[nodiscard]] const Normal& coefficient(int k) const { return coefficients.at(static_cast<std::size_t>(k)); }
  [[nodiscard]] Expr coefficient_expr(int k) const { return from_normal(coefficient(k)); }
  /// Sum of c_k eps^k as an expression in eps.
  [[nodiscard]] Normal truncated(const Normal& eps) const;
};

/// Throws PoleError when the expansion has negative powers or a branch point at the center.
SeriesPoly series(const Normal& e, const std::string& var, std::optional<Rational> center, int order);
SeriesPoly series(const Expr& e, const std::string& var, std::optional<Rational> center, int order);

/// Laurent series in a single symbol with exponents known below `precision`.
class Laurent {
 public:
  static constexpr int kExact = 1 << 28;

  Laurent() = default;
  static Laurent constant(const Normal& c);
  static Laurent monomial(const Normal& c, int exponent);

  [[nodiscard]] int precision() const { return precision_; }
  /// Lowest exponent with a nonzero coefficient; nullopt when all known terms vanish.
  [[nodiscard]] std::optional<int> valuation() const;
  [[nodiscard]] Normal coefficient(int k) const;
  [[nodiscard]] const std::map<int, Normal>& terms() const { return terms_; }

  Laurent truncate(int precision) const;
  friend Laurent operator+(const Laurent& a, const Laurent& b);
  friend Laurent operator-(const Laurent& a, const Laurent& b);
  friend Laurent operator*(const Laurent& a, const Laurent& b);
  Laurent operator-() const;
  Laurent scaled(const Normal& c) const;
  Laurent inverse() const;
  Laurent pow(int n) const;

 private:
  std::map<int, Normal> terms_;
  int precision_ = kExact;
};

}  // namespace kpa::expr

#endif  // KPA_EXPR_SERIES_HPP
