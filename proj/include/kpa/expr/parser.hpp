#ifndef KPA_EXPR_PARSER_HPP
#define KPA_EXPR_PARSER_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kpa/expr/expr.hpp"

namespace kpa::expr {

/// Identifiers the parser accepts: plain symbols and abstract functions with fixed arity.
class SymbolTable {
 public:
  /// x0..x3, p0..p3, kappa, kappabar, m, psq, xsq.
  static SymbolTable standard();

  void add_symbol(const std::string& name) { symbols_.insert(name); }
  void add_function(const std::string& name, int arity) { functions_[name] = arity; }
  [[nodiscard]] bool has_symbol(const std::string& name) const { return symbols_.count(name) > 0; }
  [[nodiscard]] std::optional<int> function_arity(const std::string& name) const;
  [[nodiscard]] std::vector<std::string> names() const;

 private:
  std::set<std::string> symbols_;
  std::map<std::string, int> functions_;
};

struct ParseOptions {
  /// Rewrite psq and xsq into component sums while parsing.
  bool expand_sugar = true;
};

/// Throws ParseError (with line and column) or UnknownIdentifier.
Expr parse(std::string_view text, const SymbolTable& table = SymbolTable::standard(), ParseOptions options = {});

}  // namespace kpa::expr

#endif  // KPA_EXPR_PARSER_HPP
