#include "umbilic/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "umbilic/errors.hpp"

namespace umbilic {

ParseError::ParseError(const std::string& message, std::size_t offset, std::string expected)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message +
                         (expected.empty() ? std::string{} : " (expected " + expected + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(const std::string& name, std::size_t offset)
    : ParseError("unknown identifier '" + name + "'", offset,
                 "variable u/v, constant pi/e, a function, or a declared parameter"),
      name_(name) {}

namespace ast {

Expr number(double x) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Number;
  n->number = x;
  return n;
}

Expr variable(const std::string& name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Variable;
  n->name = name;
  return n;
}

Expr parameter(const std::string& name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Parameter;
  n->name = name;
  return n;
}

Expr unary(UnaryFn fn, Expr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Unary;
  n->fn = fn;
  n->lhs = std::move(operand);
  return n;
}

Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
  if (op == BinaryOp::Pow && (!rhs || rhs->kind != NodeKind::Number)) {
    throw std::invalid_argument("exponent must be a literal number");
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Binary;
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

}  // namespace ast

namespace {

struct FunctionName {
  std::string_view name;
  UnaryFn fn;
};

constexpr FunctionName kFunctions[] = {
    {"sin", UnaryFn::Sin},   {"cos", UnaryFn::Cos}, {"sinh", UnaryFn::Sinh},
    {"cosh", UnaryFn::Cosh}, {"exp", UnaryFn::Exp}, {"log", UnaryFn::Log},
    {"sqrt", UnaryFn::Sqrt}, {"atan", UnaryFn::Atan},
};

const char* function_name(UnaryFn fn) {
  for (const auto& f : kFunctions) {
    if (f.fn == fn) return f.name.data();
  }
  return "neg";
}

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>& params) : text_(text), params_(params) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) {
      fail("unexpected '" + std::string(1, text_[pos_]) + "'", "operator or end of input");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message, const std::string& expected) const {
    throw ParseError(message, pos_ + 1, expected);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'"
                               : std::string("unexpected end of input"),
           std::string("'") + c + "'");
    }
  }

  static std::shared_ptr<ExprNode> mutable_copy(const Expr& e) { return std::make_shared<ExprNode>(*e); }

  Expr with_span(Expr e, std::size_t begin) const {
    auto n = mutable_copy(e);
    n->span = {begin, pos_};
    return n;
  }

  Expr parse_expr() {
    skip_space();
    const std::size_t begin = pos_;
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = with_span(ast::binary(BinaryOp::Add, lhs, parse_term()), begin);
      } else if (accept('-')) {
        lhs = with_span(ast::binary(BinaryOp::Sub, lhs, parse_term()), begin);
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    skip_space();
    const std::size_t begin = pos_;
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = with_span(ast::binary(BinaryOp::Mul, lhs, parse_unary()), begin);
      } else if (accept('/')) {
        lhs = with_span(ast::binary(BinaryOp::Div, lhs, parse_unary()), begin);
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    skip_space();
    const std::size_t begin = pos_;
    if (accept('-')) {
      Expr operand = parse_unary();
      // Negated literals fold, so printed negative numbers read back unchanged.
      if (operand->kind == NodeKind::Number) return with_span(ast::number(-operand->number), begin);
      return with_span(ast::unary(UnaryFn::Neg, operand), begin);
    }
    return parse_power();
  }

  Expr parse_power() {
    skip_space();
    const std::size_t begin = pos_;
    Expr base = parse_primary();
    while (accept('^')) {
      Expr exponent = parse_exponent_literal();
      base = with_span(ast::binary(BinaryOp::Pow, base, exponent), begin);
    }
    return base;
  }

  Expr parse_exponent_literal() {
    skip_space();
    const std::size_t begin = pos_;
    bool paren = accept('(');
    bool negative = accept('-');
    skip_space();
    if (pos_ >= text_.size() || !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      fail("exponent is not a literal number", "number literal");
    }
    double x = parse_number_literal();
    if (paren) expect(')');
    return with_span(ast::number(negative ? -x : x), begin);
  }

  double parse_number_literal() {
    const std::size_t begin = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + begin, text_.data() + pos_, x);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = begin;
      fail("malformed number", "number literal");
    }
    return x;
  }

  Expr parse_primary() {
    skip_space();
    const std::size_t begin = pos_;
    if (pos_ >= text_.size()) fail("unexpected end of input", "number, identifier or '('");
    const char c = text_[pos_];
    if (accept('(')) {
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const double x = parse_number_literal();
      return with_span(ast::number(x), begin);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string id(text_.substr(begin, pos_ - begin));
      for (const auto& f : kFunctions) {
        if (f.name == id) {
          expect('(');
          Expr arg = parse_expr();
          expect(')');
          return with_span(ast::unary(f.fn, arg), begin);
        }
      }
      if (id == "u" || id == "v") return with_span(ast::variable(id), begin);
      if (id == "pi" || id == "e") {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Constant;
        n->name = id;
        n->number = id == "pi" ? std::numbers::pi : std::numbers::e;
        n->span = {begin, pos_};
        return n;
      }
      if (params_.count(id) != 0) return with_span(ast::parameter(id), begin);
      throw UnknownIdentifier(id, begin + 1);
    }
    fail("unexpected '" + std::string(1, c) + "'", "number, identifier or '('");
  }

  std::string_view text_;
  const std::set<std::string>& params_;
  std::size_t pos_ = 0;
};

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Jet2 apply(UnaryFn fn, const Jet2& a) {
  switch (fn) {
    case UnaryFn::Neg: return -a;
    case UnaryFn::Sin: return sin(a);
    case UnaryFn::Cos: return cos(a);
    case UnaryFn::Sinh: return sinh(a);
    case UnaryFn::Cosh: return cosh(a);
    case UnaryFn::Exp: return exp(a);
    case UnaryFn::Log: return log(a);
    case UnaryFn::Sqrt: return sqrt(a);
    case UnaryFn::Atan: return atan(a);
  }
  return a;
}

struct Evaluator {
  double u;
  double v;
  int order;
  const ParamTable& params;

  Jet2 operator()(const ExprNode& n) const {
    switch (n.kind) {
      case NodeKind::Number:
      case NodeKind::Constant:
        return Jet2::constant(n.number, order);
      case NodeKind::Variable:
        if (order == 0) return Jet2::constant(n.name == "u" ? u : v, 0);
        return n.name == "u" ? Jet2::variable(Var::U, u, order) : Jet2::variable(Var::V, v, order);
      case NodeKind::Parameter: {
        auto it = params.find(n.name);
        if (it == params.end()) throw InvalidInput("unbound parameter '" + n.name + "'");
        return Jet2::constant(it->second, order);
      }
      case NodeKind::Unary:
        return annotate(n, [&] { return apply(n.fn, (*this)(*n.lhs)); });
      case NodeKind::Binary: {
        if (n.op == BinaryOp::Pow) {
          const Jet2 base = (*this)(*n.lhs);
          return annotate(n, [&] { return pow(base, n.rhs->number); });
        }
        const Jet2 a = (*this)(*n.lhs);
        const Jet2 b = (*this)(*n.rhs);
        switch (n.op) {
          case BinaryOp::Add: return a + b;
          case BinaryOp::Sub: return a - b;
          case BinaryOp::Mul: return a * b;
          case BinaryOp::Div: return annotate(n, [&] { return a / b; });
          case BinaryOp::Pow: break;
        }
      }
    }
    throw std::logic_error("malformed expression node");
  }

  template <class F>
  Jet2 annotate(const ExprNode& n, F&& f) const {
    try {
      return f();
    } catch (const SingularEvaluation& e) {
      if (e.point()) throw;
      throw e.at({u, v}, "in '" + to_string(std::make_shared<ExprNode>(n)) + "' [" +
                             std::to_string(n.span.begin + 1) + ", " + std::to_string(n.span.end + 1) + ")");
    }
  }
};

}  // namespace

Expr parse(std::string_view text, const std::set<std::string>& parameters) {
  return Parser(text, parameters).parse_all();
}

Expr parse(std::string_view text, const ParamTable& parameters) {
  std::set<std::string> names;
  for (const auto& [k, _] : parameters) names.insert(k);
  return parse(text, names);
}

std::string to_string(const Expr& e) {
  switch (e->kind) {
    case NodeKind::Number: {
      const std::string s = format_number(e->number);
      return std::signbit(e->number) ? "(" + s + ")" : s;
    }
    case NodeKind::Constant:
    case NodeKind::Variable:
    case NodeKind::Parameter:
      return e->name;
    case NodeKind::Unary:
      if (e->fn == UnaryFn::Neg) return "(-" + to_string(e->lhs) + ")";
      return std::string(function_name(e->fn)) + "(" + to_string(e->lhs) + ")";
    case NodeKind::Binary: {
      static constexpr const char* kOps[] = {" + ", " - ", " * ", " / ", " ^ "};
      return "(" + to_string(e->lhs) + kOps[static_cast<int>(e->op)] + to_string(e->rhs) + ")";
    }
  }
  return {};
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Number:
      return a->number == b->number;
    case NodeKind::Constant:
    case NodeKind::Variable:
    case NodeKind::Parameter:
      return a->name == b->name;
    case NodeKind::Unary:
      return a->fn == b->fn && structurally_equal(a->lhs, b->lhs);
    case NodeKind::Binary:
      return a->op == b->op && structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
  return false;
}

Jet2 eval_jet(const Expr& e, double u, double v, int order, const ParamTable& params) {
  return Evaluator{u, v, order, params}(*e);
}

double eval(const Expr& e, double u, double v, const ParamTable& params) {
  return eval_jet(e, u, v, 0, params).value();
}

Expr substitute_chart(const Expr& e, const Expr& u_replacement, const Expr& v_replacement) {
  switch (e->kind) {
    case NodeKind::Variable:
      if (e->name == "u" && u_replacement) return u_replacement;
      if (e->name == "v" && v_replacement) return v_replacement;
      return e;
    case NodeKind::Unary:
      return ast::unary(e->fn, substitute_chart(e->lhs, u_replacement, v_replacement));
    case NodeKind::Binary:
      if (e->op == BinaryOp::Pow) return ast::binary(e->op, substitute_chart(e->lhs, u_replacement, v_replacement), e->rhs);
      return ast::binary(e->op, substitute_chart(e->lhs, u_replacement, v_replacement),
                         substitute_chart(e->rhs, u_replacement, v_replacement));
    default:
      return e;
  }
}

Expr substitute(const Expr& e, const std::string& var, const Expr& replacement) {
  if (var == "u") return substitute_chart(e, replacement, nullptr);
  if (var == "v") return substitute_chart(e, nullptr, replacement);
  throw std::invalid_argument("substitution variable must be u or v");
}

}  // namespace umbilic
