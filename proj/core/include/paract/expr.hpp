#pragma once

#include <paract/error.hpp>

#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace paract {

/// Symbol-name → value map used when evaluating expressions. Backed by a
/// flat vector; linear lookup beats hashing at the handful of symbols seen
/// in practice. Extra entries are permitted and ignored.
class Bindings {
 public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<std::string, double>> init);

  Bindings& set(std::string name, double value);
  const double* find(std::string_view name) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

enum class ExprKind {
  Constant,
  Variable,
  Parameter,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  IntPow,
  Sin,
  Cos,
  Exp,
  Sqrt,
};

/// Immutable expression tree with value semantics; copies share nodes.
/// Every operation is pure, so Expr values may be shared and evaluated
/// from any number of threads.
///
/// The language is deliberately small: arithmetic, nonnegative integer
/// powers, and sin/cos/exp/sqrt. That closure keeps exact symbolic
/// differentiation total.
class Expr {
 public:
  Expr();  // the constant 0
  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr parameter(std::string name);

  ExprKind kind() const;
  double constant_value() const;      // Constant nodes only
  const std::string& symbol() const;  // Variable / Parameter nodes only
  int exponent() const;               // IntPow nodes only
  std::size_t child_count() const;
  Expr child(std::size_t index) const;

  /// Evaluates in double precision. Throws UnboundSymbolError when a free
  /// symbol has no binding and DomainFaultError on division by zero or a
  /// negative sqrt argument.
  double evaluate(const Bindings& bindings) const;

  /// Exact structural derivative with respect to `symbol`. The result
  /// evaluates to the true derivative wherever this expression is smooth.
  Expr differentiate(std::string_view symbol) const;

  /// Simultaneous substitution of symbols by expressions.
  Expr substitute(const std::map<std::string, Expr>& replacements) const;

  std::set<std::string> free_symbols() const;
  bool depends_on(std::string_view symbol) const;

  /// Canonical printer; parse(to_string()) evaluates identically.
  std::string to_string() const;

  friend Expr operator-(Expr operand);
  friend Expr operator+(Expr lhs, Expr rhs);
  friend Expr operator-(Expr lhs, Expr rhs);
  friend Expr operator*(Expr lhs, Expr rhs);
  friend Expr operator/(Expr lhs, Expr rhs);
  friend Expr pow(Expr base, int exponent);  // exponent >= 0
  friend Expr sin(Expr operand);
  friend Expr cos(Expr operand);
  friend Expr exp(Expr operand);
  friend Expr sqrt(Expr operand);

  struct Node;  // defined in expr.cpp; opaque to users

 private:
  explicit Expr(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

Expr operator-(Expr operand);
Expr operator+(Expr lhs, Expr rhs);
Expr operator-(Expr lhs, Expr rhs);
Expr operator*(Expr lhs, Expr rhs);
Expr operator/(Expr lhs, Expr rhs);
Expr pow(Expr base, int exponent);
Expr sin(Expr operand);
Expr cos(Expr operand);
Expr exp(Expr operand);
Expr sqrt(Expr operand);

/// Malformed source text; `offset` is the 0-based byte position of the fault.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A call to anything other than sin/cos/exp/sqrt.
class UnknownFunctionError : public SyntaxError {
 public:
  UnknownFunctionError(const std::string& name, std::size_t offset);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// An identifier that is in neither declared symbol set.
class UnknownSymbolError : public SyntaxError {
 public:
  UnknownSymbolError(const std::string& name, std::size_t offset);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Evaluation reached a free symbol with no binding.
class UnboundSymbolError : public Error {
 public:
  explicit UnboundSymbolError(const std::string& name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Division by zero or sqrt of a negative value; `node` is the printed form
/// of the offending subexpression.
class DomainFaultError : public Error {
 public:
  DomainFaultError(const std::string& message, std::string node);
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

/// Declares which identifiers parse as variables and which as parameters.
/// The split is the caller's choice; it is never inferred from the text.
struct SymbolTable {
  std::set<std::string> variables;
  std::set<std::string> parameters;
};

/// Parses the grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ['^' integer] | '-' factor
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
/// with precedence ^ > unary minus > *,/ > +,-.
Expr parse(std::string_view source, const SymbolTable& symbols);

}  // namespace paract
