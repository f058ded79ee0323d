#ifndef KPA_EXPR_ERRORS_HPP
#define KPA_EXPR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kpa {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownIdentifier : public Error {
 public:
  using Error::Error;
};

/// Negative radicand, non-positive logarithm argument or similar at a numeric point.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class CyclicBinding : public Error {
 public:
  using Error::Error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kpa

#endif  // KPA_EXPR_ERRORS_HPP
