#pragma once

// Small expression language for immersion components f(u, v).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' literal)*        literal: ['-'] number, optionally parenthesized
//   primary := number | 'pi' | 'e' | 'u' | 'v' | parameter
//            | function '(' expr ')' | '(' expr ')'
//   function: sin cos sinh cosh exp log sqrt atan
//
// '^' binds tighter than unary minus, so -u^2 is -(u^2).

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "umbilic/jet.hpp"

namespace umbilic {

using ParamTable = std::map<std::string, double>;

enum class NodeKind { Number, Constant, Variable, Parameter, Unary, Binary };
enum class UnaryFn { Neg, Sin, Cos, Sinh, Cosh, Exp, Log, Sqrt, Atan };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Half-open byte range [begin, end) into the parsed text.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;  // Number, Constant
  std::string name;     // Constant, Variable, Parameter
  UnaryFn fn = UnaryFn::Neg;
  BinaryOp op = BinaryOp::Add;
  Expr lhs;  // Unary operand, Binary left
  Expr rhs;  // Binary right; for Pow always a Number
  SourceSpan span;
};

class ParseError : public std::runtime_error {
 public:
  /// offset is 1-based.
  ParseError(const std::string& message, std::size_t offset, std::string expected);
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Parse with the given parameter names in scope.
Expr parse(std::string_view text, const std::set<std::string>& parameters = {});
Expr parse(std::string_view text, const ParamTable& parameters);

/// Canonical, fully parenthesized text. parse(to_string(e)) is structurally equal to e.
std::string to_string(const Expr& e);

/// Structural equality; source spans are ignored.
bool structurally_equal(const Expr& a, const Expr& b);

Jet2 eval_jet(const Expr& e, double u, double v, int order, const ParamTable& params);
double eval(const Expr& e, double u, double v, const ParamTable& params);

/// Replace every occurrence of variable `var` ("u" or "v") by `replacement`.
Expr substitute(const Expr& e, const std::string& var, const Expr& replacement);
/// Simultaneous substitution of both chart variables.
Expr substitute_chart(const Expr& e, const Expr& u_replacement, const Expr& v_replacement);

namespace ast {
Expr number(double x);
Expr variable(const std::string& name);
Expr parameter(const std::string& name);
Expr unary(UnaryFn fn, Expr operand);
Expr binary(BinaryOp op, Expr lhs, Expr rhs);
}  // namespace ast

}  // namespace umbilic
