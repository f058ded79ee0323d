#include "kpa/expr/parser.hpp"

#include <cctype>

#include "kpa/expr/errors.hpp"

namespace kpa::expr {

SymbolTable SymbolTable::standard() {
  SymbolTable t;
  for (const char* s : {"x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3", "kappa", "kappabar", "m", "psq", "xsq"})
    t.add_symbol(s);
  return t;
}

std::optional<int> SymbolTable::function_arity(const std::string& name) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> SymbolTable::names() const {
  std::vector<std::string> out(symbols_.begin(), symbols_.end());
  for (const auto& [f, n] : functions_) out.push_back(f + "/" + std::to_string(n));
  return out;
}

namespace {

const std::set<std::string>& builtin_functions() {
  static const std::set<std::string> f{"exp", "ln", "sqrt", "sinh", "cosh"};
  return f;
}

class Parser {
 public:
  Parser(std::string_view text, const SymbolTable& table, ParseOptions options)
      : text_(text), table_(table), options_(options) {}

  Expr run() {
    skip_space();
    if (at_end()) fail("empty expression");
    Expr e = expression();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return e;
  }

 private:
  [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
  [[nodiscard]] char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  bool accept(char c) {
    skip_space();
    if (peek() != c) return false;
    advance();
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, col_); }

  Expr expression() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(unary());
      } else if (accept('/')) {
        factors.push_back(Expr::power(unary(), -1));
      } else {
        break;
      }
    }
    return Expr::product(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    int line = line_;
    int col = col_;
    Expr ex = unary();
    auto q = to_normal(ex).as_rational();
    if (!q) throw ParseError("exponent must be a constant", line, col);
    if (q->get_den() == 1) return Expr::power(base, static_cast<int>(q->get_num().get_si()));
    if (q->get_den() == 2) return Expr::power(sqrt(base), static_cast<int>(q->get_num().get_si()));
    throw ParseError("exponent must be an integer or half-integer", line, col);
  }

  std::string identifier() {
    std::string id;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      id += peek();
      advance();
    }
    return id;
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> args;
    expect('(');
    if (accept(')')) return args;
    do {
      args.push_back(expression());
    } while (accept(','));
    expect(')');
    return args;
  }

  Expr primary() {
    skip_space();
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        digits += peek();
        advance();
      }
      if (peek() == '.') fail("decimal fractions are not supported; write a ratio a/b");
      return Expr(Rational(mpz_class(digits)));
    }
    if (accept('(')) {
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      int line = line_;
      int col = col_;
      std::string id = identifier();
      std::vector<int> orders;
      if (id == "D" && peek() == '[') {
        advance();
        do {
          skip_space();
          std::string digits;
          while (std::isdigit(static_cast<unsigned char>(peek()))) {
            digits += peek();
            advance();
          }
          if (digits.empty()) fail("expected derivative order");
          orders.push_back(std::stoi(digits));
        } while (accept(','));
        expect(']');
        line = line_;
        col = col_;
        id = identifier();
        if (id.empty()) fail("expected function name after derivative orders");
      }
      skip_space();
      if (peek() == '(') {
        if (orders.empty() && builtin_functions().count(id)) {
          auto args = arguments();
          if (args.size() != 1) throw ParseError(id + " takes exactly one argument", line, col);
          if (id == "exp") return exp(args[0]);
          if (id == "ln") return ln(args[0]);
          if (id == "sqrt") return sqrt(args[0]);
          if (id == "sinh") return sinh(args[0]);
          return cosh(args[0]);
        }
        auto arity = table_.function_arity(id);
        if (!arity) unknown(id, line, col);
        auto args = arguments();
        if (static_cast<int>(args.size()) != *arity)
          throw ParseError(id + " expects " + std::to_string(*arity) + " arguments", line, col);
        if (!orders.empty() && orders.size() != args.size())
          throw ParseError("derivative orders do not match arguments of " + id, line, col);
        return Expr::apply(Expr::Func::Abstract, std::move(args), id, orders);
      }
      if (!orders.empty()) fail("derivative orders need a function application");
      if (!table_.has_symbol(id)) unknown(id, line, col);
      if (options_.expand_sugar && (id == "psq" || id == "xsq")) {
        std::string c1(1, id[0]);
        std::vector<Expr> sq;
        for (int i = 1; i <= 3; ++i) sq.push_back(Expr::power(Expr::symbol(c1 + std::to_string(i)), 2));
        return Expr::sum(std::move(sq));
      }
      return Expr::symbol(id);
    }
    if (at_end()) fail("unexpected end of input");
    fail(std::string("unexpected '") + c + "'");
  }

  [[noreturn]] void unknown(const std::string& id, int line, int col) const {
    std::string known;
    for (const auto& n : table_.names()) known += (known.empty() ? "" : ", ") + n;
    throw UnknownIdentifier("unknown identifier '" + id + "' at line " + std::to_string(line) + ", column " +
                            std::to_string(col) + "; registered: " + known);
  }

  std::string_view text_;
  const SymbolTable& table_;
  ParseOptions options_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

Expr parse(std::string_view text, const SymbolTable& table, ParseOptions options) {
  return Parser(text, table, options).run();
}

}  // namespace kpa::expr
