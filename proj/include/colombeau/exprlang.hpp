#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "colombeau/error.hpp"
#include "colombeau/genfunc.hpp"
#include "colombeau/jets.hpp"

namespace colombeau {

// Parse failure, located by byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset, std::vector<std::string> suggestions = {});

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
  [[nodiscard]] const std::string& message() const noexcept { return message_; }
  [[nodiscard]] const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

 private:
  std::string message_;
  std::size_t offset_;
  std::vector<std::string> suggestions_;
};

// Named smooth functions usable inside bar(...) and tilde(...).
//
// Built-ins: tanh10 = tanh(10x), sin, exp, gauss = exp(-x^2),
// poly(c0, c1, ...) and tanh(k) = tanh(k x). Lookups are case-sensitive.
class FunctionRegistry {
 public:
  using Factory = std::function<SmoothPrimitive(std::span<const double>)>;

  static FunctionRegistry builtins();

  void add(std::string name, SmoothPrimitive f);
  // A parametric entry accepts between min_args and max_args numbers.
  void add_parametric(std::string name, std::size_t min_args, std::size_t max_args, Factory factory);

  [[nodiscard]] bool contains(const std::string& name) const;
  [[nodiscard]] std::vector<std::string> names() const;

  // Throws ContractViolation for unknown names or a wrong argument count.
  [[nodiscard]] SmoothPrimitive resolve(const std::string& name, std::span<const double> args) const;

 private:
  struct Entry {
    std::size_t min_args = 0;
    std::size_t max_args = 0;
    Factory factory;
  };
  std::map<std::string, Entry> entries_;
};

// Names within edit distance 2 of `name` (or sharing a prefix), best first.
[[nodiscard]] std::vector<std::string> close_matches(std::string_view name, const std::vector<std::string>& candidates);

// Reference to a registry function, e.g. tanh10 or poly(1, 2).
struct FunctionRef {
  std::string name;
  std::vector<double> args;
  SmoothPrimitive function;

  [[nodiscard]] std::string text() const;
  friend bool operator==(const FunctionRef& a, const FunctionRef& b) { return a.name == b.name && a.args == b.args; }
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace ast {
struct Delta {};
struct Heaviside {};
struct NullEx {};
struct Bar {
  FunctionRef f;
};
struct Tilde {
  FunctionRef f;
};
struct Number {
  double value;
};
struct Sum {
  ExprPtr left;
  ExprPtr right;
};
struct Product {
  ExprPtr left;
  ExprPtr right;
};
struct Scalar {
  double c;
  ExprPtr child;
};
struct Derivative {
  int n;
  ExprPtr child;
};
}  // namespace ast

struct Expr {
  std::variant<ast::Delta, ast::Heaviside, ast::NullEx, ast::Bar, ast::Tilde, ast::Number, ast::Sum, ast::Product,
               ast::Scalar, ast::Derivative>
      node;
  std::size_t offset = 0;  // byte offset of the node's first token
};

// Structural equality; offsets are ignored.
[[nodiscard]] bool operator==(const Expr& a, const Expr& b);

// Recursive-descent parser for
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := NUMBER ['*' factor] | atom | 'D' ['^' INT] '(' expr ')' | '(' expr ')'
//   atom   := 'delta' | 'heaviside' | 'nullex' | 'bar' '(' fn ')' | 'tilde' '(' fn ')'
//   fn     := IDENT ['(' NUMBER (',' NUMBER)* ')']
//
// 'a - b' becomes Sum(a, Scalar(-1, b)). A NUMBER in factor position may carry
// a leading '-'. Throws ParseError.
[[nodiscard]] Expr parse(std::string_view text, const FunctionRegistry& registry);
[[nodiscard]] Expr parse(std::string_view text);

// Lowers an Expr into the evaluable DAG. A bare number c becomes tilde(poly(c)).
[[nodiscard]] GeneralizedFunction to_dag(const Expr& e);

// parse + to_dag with the built-in registry.
[[nodiscard]] GeneralizedFunction parse_gf(std::string_view text);

}  // namespace colombeau
