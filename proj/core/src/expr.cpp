#include <paract/expr.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace paract {

// ---------------------------------------------------------------------------
// Bindings

Bindings::Bindings(std::initializer_list<std::pair<std::string, double>> init) {
  for (const auto& [name, value] : init) set(name, value);
}

Bindings& Bindings::set(std::string name, double value) {
  for (auto& entry : entries_) {
    if (entry.first == name) {
      entry.second = value;
      return *this;
    }
  }
  entries_.emplace_back(std::move(name), value);
  return *this;
}

const double* Bindings::find(std::string_view name) const {
  for (const auto& entry : entries_) {
    if (entry.first == name) return &entry.second;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Nodes

struct Expr::Node {
  ExprKind kind;
  double value = 0.0;     // Constant
  std::string name;       // Variable / Parameter
  int exponent = 0;       // IntPow
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_leaf(ExprKind kind, double value, std::string name) {
  auto node = std::make_shared<Expr::Node>();
  node->kind = kind;
  node->value = value;
  node->name = std::move(name);
  return node;
}

NodePtr make_unary(ExprKind kind, NodePtr a) {
  auto node = std::make_shared<Expr::Node>();
  node->kind = kind;
  node->a = std::move(a);
  return node;
}

NodePtr make_binary(ExprKind kind, NodePtr a, NodePtr b) {
  auto node = std::make_shared<Expr::Node>();
  node->kind = kind;
  node->a = std::move(a);
  node->b = std::move(b);
  return node;
}

NodePtr make_pow(NodePtr base, int exponent) {
  auto node = std::make_shared<Expr::Node>();
  node->kind = ExprKind::IntPow;
  node->a = std::move(base);
  node->exponent = exponent;
  return node;
}

bool is_const(const NodePtr& n, double v) {
  return n->kind == ExprKind::Constant && n->value == v;
}

// Exact integer power by repeated squaring; deterministic across platforms.
double int_pow(double base, int exponent) {
  double result = 1.0;
  double factor = base;
  for (int k = exponent; k > 0; k >>= 1) {
    if (k & 1) result *= factor;
    if (k > 1) factor *= factor;
  }
  return result;
}

}  // namespace

Expr::Expr() : node_(make_leaf(ExprKind::Constant, 0.0, {})) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  return Expr(make_leaf(ExprKind::Constant, value, {}));
}
Expr Expr::variable(std::string name) {
  return Expr(make_leaf(ExprKind::Variable, 0.0, std::move(name)));
}
Expr Expr::parameter(std::string name) {
  return Expr(make_leaf(ExprKind::Parameter, 0.0, std::move(name)));
}

ExprKind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
const std::string& Expr::symbol() const { return node_->name; }
int Expr::exponent() const { return node_->exponent; }

std::size_t Expr::child_count() const {
  if (node_->b) return 2;
  if (node_->a) return 1;
  return 0;
}

Expr Expr::child(std::size_t index) const {
  return Expr(index == 0 ? node_->a : node_->b);
}

Expr operator-(Expr operand) {
  return Expr(make_unary(ExprKind::Neg, std::move(operand.node_)));
}
Expr operator+(Expr lhs, Expr rhs) {
  return Expr(make_binary(ExprKind::Add, std::move(lhs.node_), std::move(rhs.node_)));
}
Expr operator-(Expr lhs, Expr rhs) {
  return Expr(make_binary(ExprKind::Sub, std::move(lhs.node_), std::move(rhs.node_)));
}
Expr operator*(Expr lhs, Expr rhs) {
  return Expr(make_binary(ExprKind::Mul, std::move(lhs.node_), std::move(rhs.node_)));
}
Expr operator/(Expr lhs, Expr rhs) {
  return Expr(make_binary(ExprKind::Div, std::move(lhs.node_), std::move(rhs.node_)));
}
Expr pow(Expr base, int exponent) {
  if (exponent < 0) throw Error("pow: exponent must be a nonnegative integer");
  return Expr(make_pow(std::move(base.node_), exponent));
}
Expr sin(Expr operand) { return Expr(make_unary(ExprKind::Sin, std::move(operand.node_))); }
Expr cos(Expr operand) { return Expr(make_unary(ExprKind::Cos, std::move(operand.node_))); }
Expr exp(Expr operand) { return Expr(make_unary(ExprKind::Exp, std::move(operand.node_))); }
Expr sqrt(Expr operand) { return Expr(make_unary(ExprKind::Sqrt, std::move(operand.node_))); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::string print_node(const NodePtr& node);

double eval_node(const NodePtr& n, const Bindings& bindings) {
  switch (n->kind) {
    case ExprKind::Constant:
      return n->value;
    case ExprKind::Variable:
    case ExprKind::Parameter: {
      const double* bound = bindings.find(n->name);
      if (bound == nullptr) throw UnboundSymbolError(n->name);
      return *bound;
    }
    case ExprKind::Neg:
      return -eval_node(n->a, bindings);
    case ExprKind::Add:
      return eval_node(n->a, bindings) + eval_node(n->b, bindings);
    case ExprKind::Sub:
      return eval_node(n->a, bindings) - eval_node(n->b, bindings);
    case ExprKind::Mul:
      return eval_node(n->a, bindings) * eval_node(n->b, bindings);
    case ExprKind::Div: {
      const double num = eval_node(n->a, bindings);
      const double den = eval_node(n->b, bindings);
      if (den == 0.0) throw DomainFaultError("division by zero", print_node(n));
      return num / den;
    }
    case ExprKind::IntPow:
      return int_pow(eval_node(n->a, bindings), n->exponent);
    case ExprKind::Sin:
      return std::sin(eval_node(n->a, bindings));
    case ExprKind::Cos:
      return std::cos(eval_node(n->a, bindings));
    case ExprKind::Exp:
      return std::exp(eval_node(n->a, bindings));
    case ExprKind::Sqrt: {
      const double arg = eval_node(n->a, bindings);
      if (arg < 0.0) throw DomainFaultError("sqrt of negative value", print_node(n));
      return std::sqrt(arg);
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace

double Expr::evaluate(const Bindings& bindings) const {
  return eval_node(node_, bindings);
}

// ---------------------------------------------------------------------------
// Differentiation
//
// The folding constructors below only drop subtrees multiplied by an exact
// constant zero, so the derivative still evaluates to the true derivative at
// every point where the original expression is smooth.

namespace {

NodePtr d_const(double v) { return make_leaf(ExprKind::Constant, v, {}); }

NodePtr d_neg(NodePtr a) {
  if (a->kind == ExprKind::Constant) return d_const(-a->value);
  if (a->kind == ExprKind::Neg) return a->a;
  return make_unary(ExprKind::Neg, std::move(a));
}

NodePtr d_add(NodePtr a, NodePtr b) {
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
    return d_const(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make_binary(ExprKind::Add, std::move(a), std::move(b));
}

NodePtr d_sub(NodePtr a, NodePtr b) {
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
    return d_const(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return d_neg(std::move(b));
  return make_binary(ExprKind::Sub, std::move(a), std::move(b));
}

NodePtr d_mul(NodePtr a, NodePtr b) {
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
    return d_const(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return d_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return make_binary(ExprKind::Mul, std::move(a), std::move(b));
}

NodePtr d_div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return d_const(0.0);
  if (is_const(b, 1.0)) return a;
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant && b->value != 0.0)
    return d_const(a->value / b->value);
  return make_binary(ExprKind::Div, std::move(a), std::move(b));
}

NodePtr d_pow(NodePtr base, int exponent) {
  if (exponent == 0) return d_const(1.0);
  if (exponent == 1) return base;
  if (base->kind == ExprKind::Constant) return d_const(int_pow(base->value, exponent));
  return make_pow(std::move(base), exponent);
}

NodePtr diff_node(const NodePtr& n, std::string_view symbol) {
  switch (n->kind) {
    case ExprKind::Constant:
      return d_const(0.0);
    case ExprKind::Variable:
    case ExprKind::Parameter:
      return d_const(n->name == symbol ? 1.0 : 0.0);
    case ExprKind::Neg:
      return d_neg(diff_node(n->a, symbol));
    case ExprKind::Add:
      return d_add(diff_node(n->a, symbol), diff_node(n->b, symbol));
    case ExprKind::Sub:
      return d_sub(diff_node(n->a, symbol), diff_node(n->b, symbol));
    case ExprKind::Mul:
      return d_add(d_mul(diff_node(n->a, symbol), n->b),
                   d_mul(n->a, diff_node(n->b, symbol)));
    case ExprKind::Div:
      // (a/b)' = (a'·b − a·b') / b²
      return d_div(d_sub(d_mul(diff_node(n->a, symbol), n->b),
                         d_mul(n->a, diff_node(n->b, symbol))),
                   d_pow(n->b, 2));
    case ExprKind::IntPow:
      if (n->exponent == 0) return d_const(0.0);
      return d_mul(d_mul(d_const(static_cast<double>(n->exponent)),
                         d_pow(n->a, n->exponent - 1)),
                   diff_node(n->a, symbol));
    case ExprKind::Sin:
      return d_mul(make_unary(ExprKind::Cos, n->a), diff_node(n->a, symbol));
    case ExprKind::Cos:
      return d_neg(d_mul(make_unary(ExprKind::Sin, n->a), diff_node(n->a, symbol)));
    case ExprKind::Exp:
      return d_mul(make_unary(ExprKind::Exp, n->a), diff_node(n->a, symbol));
    case ExprKind::Sqrt:
      // (√a)' = a' / (2√a)
      return d_div(diff_node(n->a, symbol),
                   d_mul(d_const(2.0), make_unary(ExprKind::Sqrt, n->a)));
  }
  throw Error("corrupt expression node");
}

}  // namespace

Expr Expr::differentiate(std::string_view symbol) const {
  return Expr(diff_node(node_, symbol));
}

// ---------------------------------------------------------------------------
// Substitution and symbol queries

namespace {

NodePtr substitute_node(const NodePtr& n, const std::map<std::string, Expr>& repl,
                        const std::map<std::string, NodePtr>& repl_nodes) {
  switch (n->kind) {
    case ExprKind::Constant:
      return n;
    case ExprKind::Variable:
    case ExprKind::Parameter: {
      auto hit = repl_nodes.find(n->name);
      return hit == repl_nodes.end() ? n : hit->second;
    }
    default:
      break;
  }
  auto node = std::make_shared<Expr::Node>(*n);
  if (n->a) node->a = substitute_node(n->a, repl, repl_nodes);
  if (n->b) node->b = substitute_node(n->b, repl, repl_nodes);
  return node;
}

void collect_symbols(const NodePtr& n, std::set<std::string>& out) {
  if (n->kind == ExprKind::Variable || n->kind == ExprKind::Parameter) {
    out.insert(n->name);
    return;
  }
  if (n->a) collect_symbols(n->a, out);
  if (n->b) collect_symbols(n->b, out);
}

bool node_depends_on(const NodePtr& n, std::string_view symbol) {
  if (n->kind == ExprKind::Variable || n->kind == ExprKind::Parameter)
    return n->name == symbol;
  if (n->a && node_depends_on(n->a, symbol)) return true;
  if (n->b && node_depends_on(n->b, symbol)) return true;
  return false;
}

}  // namespace

Expr Expr::substitute(const std::map<std::string, Expr>& replacements) const {
  std::map<std::string, NodePtr> nodes;
  for (const auto& [name, expr] : replacements) nodes.emplace(name, expr.node_);
  return Expr(substitute_node(node_, replacements, nodes));
}

std::set<std::string> Expr::free_symbols() const {
  std::set<std::string> out;
  collect_symbols(node_, out);
  return out;
}

bool Expr::depends_on(std::string_view symbol) const {
  return node_depends_on(node_, symbol);
}

// ---------------------------------------------------------------------------
// Printing
//
// Precedence levels: + - (1), * / (2), unary minus (3), ^ (4), atoms (5).
// A child is parenthesized when its level is below what its position needs,
// so the printed text reparses with identical evaluation semantics.

namespace {

int precedence(const NodePtr& n) {
  switch (n->kind) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Neg:
      return 3;
    case ExprKind::IntPow:
      return 4;
    case ExprKind::Constant:
      return n->value < 0.0 ? 3 : 5;  // "-3" needs parens in "^" bases etc.
    default:
      return 5;
  }
}

std::string format_double(double v) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  (void)ec;
  return std::string(buffer, end);
}

void print_into(const NodePtr& n, int min_level, std::string& out) {
  const bool parens = precedence(n) < min_level;
  if (parens) out += '(';
  switch (n->kind) {
    case ExprKind::Constant:
      out += format_double(n->value);
      break;
    case ExprKind::Variable:
    case ExprKind::Parameter:
      out += n->name;
      break;
    case ExprKind::Neg:
      out += '-';
      print_into(n->a, 3, out);
      break;
    case ExprKind::Add:
      print_into(n->a, 1, out);
      out += " + ";
      print_into(n->b, 2, out);
      break;
    case ExprKind::Sub:
      print_into(n->a, 1, out);
      out += " - ";
      print_into(n->b, 2, out);
      break;
    case ExprKind::Mul:
      print_into(n->a, 2, out);
      out += '*';
      print_into(n->b, 3, out);
      break;
    case ExprKind::Div:
      print_into(n->a, 2, out);
      out += '/';
      print_into(n->b, 3, out);
      break;
    case ExprKind::IntPow:
      print_into(n->a, 5, out);
      out += '^';
      out += std::to_string(n->exponent);
      break;
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Sqrt: {
      switch (n->kind) {
        case ExprKind::Sin: out += "sin"; break;
        case ExprKind::Cos: out += "cos"; break;
        case ExprKind::Exp: out += "exp"; break;
        default: out += "sqrt"; break;
      }
      out += '(';
      print_into(n->a, 1, out);
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

std::string print_node(const NodePtr& node) {
  std::string out;
  print_into(node, 1, out);
  return out;
}

}  // namespace

std::string Expr::to_string() const { return print_node(node_); }

// ---------------------------------------------------------------------------
// Errors

SyntaxError::SyntaxError(const std::string& message, std::size_t offset)
    : Error(message + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}

UnknownFunctionError::UnknownFunctionError(const std::string& name, std::size_t offset)
    : SyntaxError("unknown function '" + name + "'", offset), name_(name) {}

UnknownSymbolError::UnknownSymbolError(const std::string& name, std::size_t offset)
    : SyntaxError("unknown symbol '" + name + "'", offset), name_(name) {}

UnboundSymbolError::UnboundSymbolError(const std::string& name)
    : Error("unbound symbol '" + name + "'"), name_(name) {}

DomainFaultError::DomainFaultError(const std::string& message, std::string node)
    : Error(message + " in '" + node + "'"), node_(std::move(node)) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class TokenKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokenKind kind;
  std::size_t offset;
  std::string text;      // Ident
  double value = 0.0;    // Number
  bool integral = false; // Number written as bare digits
};

class Lexer {
 public:
  explicit Lexer(std::string_view source) : source_(source) {}

  Token next() {
    while (pos_ < source_.size() && std::isspace(static_cast<unsigned char>(source_[pos_])))
      ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= source_.size()) return {TokenKind::End, start};

    const char c = source_[pos_];
    switch (c) {
      case '+': ++pos_; return {TokenKind::Plus, start};
      case '-': ++pos_; return {TokenKind::Minus, start};
      case '*': ++pos_; return {TokenKind::Star, start};
      case '/': ++pos_; return {TokenKind::Slash, start};
      case '^': ++pos_; return {TokenKind::Caret, start};
      case '(': ++pos_; return {TokenKind::LParen, start};
      case ')': ++pos_; return {TokenKind::RParen, start};
      default: break;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < source_.size() &&
             (std::isalnum(static_cast<unsigned char>(source_[pos_])) || source_[pos_] == '_'))
        ++pos_;
      Token token{TokenKind::Ident, start};
      token.text = std::string(source_.substr(start, pos_ - start));
      return token;
    }
    throw SyntaxError("unexpected character", start);
  }

 private:
  Token lex_number(std::size_t start) {
    bool integral = true;
    while (pos_ < source_.size() && std::isdigit(static_cast<unsigned char>(source_[pos_])))
      ++pos_;
    if (pos_ < source_.size() && source_[pos_] == '.') {
      integral = false;
      ++pos_;
      while (pos_ < source_.size() && std::isdigit(static_cast<unsigned char>(source_[pos_])))
        ++pos_;
    }
    if (pos_ < source_.size() && (source_[pos_] == 'e' || source_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < source_.size() && (source_[pos_] == '+' || source_[pos_] == '-')) ++pos_;
      if (pos_ < source_.size() && std::isdigit(static_cast<unsigned char>(source_[pos_]))) {
        integral = false;
        while (pos_ < source_.size() && std::isdigit(static_cast<unsigned char>(source_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // the 'e' belongs to a following identifier
      }
    }
    Token token{TokenKind::Number, start};
    token.integral = integral;
    const char* first = source_.data() + start;
    const char* last = source_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, token.value);
    if (ec != std::errc() || ptr != last) throw SyntaxError("malformed number", start);
    return token;
  }

  std::string_view source_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view source, const SymbolTable& symbols)
      : lexer_(source), symbols_(symbols) {
    advance();
  }

  Expr parse_all() {
    Expr result = parse_expr();
    if (current_.kind != TokenKind::End)
      throw SyntaxError("unexpected trailing input", current_.offset);
    return result;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  bool accept(TokenKind kind) {
    if (current_.kind != kind) return false;
    advance();
    return true;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (true) {
      if (accept(TokenKind::Plus)) {
        lhs = std::move(lhs) + parse_term();
      } else if (accept(TokenKind::Minus)) {
        lhs = std::move(lhs) - parse_term();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    while (true) {
      if (accept(TokenKind::Star)) {
        lhs = std::move(lhs) * parse_factor();
      } else if (accept(TokenKind::Slash)) {
        lhs = std::move(lhs) / parse_factor();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    if (accept(TokenKind::Minus)) return -parse_factor();
    Expr base = parse_atom();
    if (accept(TokenKind::Caret)) {
      const Token exponent = current_;
      if (exponent.kind == TokenKind::Minus)
        throw SyntaxError("exponent must be a nonnegative integer", exponent.offset);
      if (exponent.kind != TokenKind::Number || !exponent.integral)
        throw SyntaxError("expected a nonnegative integer exponent", exponent.offset);
      advance();
      return pow(std::move(base), static_cast<int>(exponent.value));
    }
    return base;
  }

  Expr parse_atom() {
    const Token token = current_;
    switch (token.kind) {
      case TokenKind::Number:
        advance();
        return Expr::constant(token.value);
      case TokenKind::LParen: {
        advance();
        Expr inner = parse_expr();
        if (!accept(TokenKind::RParen))
          throw SyntaxError("expected ')'", current_.offset);
        return inner;
      }
      case TokenKind::Ident: {
        advance();
        if (accept(TokenKind::LParen)) {
          Expr argument = parse_expr();
          if (!accept(TokenKind::RParen))
            throw SyntaxError("expected ')'", current_.offset);
          if (token.text == "sin") return sin(std::move(argument));
          if (token.text == "cos") return cos(std::move(argument));
          if (token.text == "exp") return exp(std::move(argument));
          if (token.text == "sqrt") return sqrt(std::move(argument));
          throw UnknownFunctionError(token.text, token.offset);
        }
        const bool is_variable = symbols_.variables.count(token.text) != 0;
        const bool is_parameter = symbols_.parameters.count(token.text) != 0;
        if (is_variable && is_parameter)
          throw SyntaxError("symbol '" + token.text + "' declared as both variable and parameter",
                            token.offset);
        if (is_variable) return Expr::variable(token.text);
        if (is_parameter) return Expr::parameter(token.text);
        throw UnknownSymbolError(token.text, token.offset);
      }
      default:
        throw SyntaxError("expected a number, symbol, or '('", token.offset);
    }
  }

  Lexer lexer_;
  const SymbolTable& symbols_;
  Token current_;
};

}  // namespace

Expr parse(std::string_view source, const SymbolTable& symbols) {
  return Parser(source, symbols).parse_all();
}

}  // namespace paract
