// Copyright 2026 The mbtlite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mbt/guard.hpp"

#include <cctype>
#include <charconv>

#include "mbt/error.hpp"

namespace mbt::guard {

ExprPtr Expr::Literal(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kLiteral;
  e->literal = v;
  return e;
}

ExprPtr Expr::Variable(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kVariable;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::Unary(Op op, ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kUnary;
  e->op = op;
  e->lhs = std::move(operand);
  return e;
}

ExprPtr Expr::Binary(Op op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kBinary;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::kLiteral:
      return a.literal == b.literal;
    case Expr::Kind::kVariable:
      return a.name == b.name;
    case Expr::Kind::kUnary:
      return a.op == b.op && *a.lhs == *b.lhs;
    case Expr::Kind::kBinary:
      return a.op == b.op && *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
  return false;
}

bool is_identifier(std::string_view name) {
  if (name.empty() || name == "true" || name == "false") return false;
  auto c0 = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(c0) || c0 == '_')) return false;
  for (char ch : name) {
    auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_')) return false;
  }
  return true;
}

namespace {

enum class Tok {
  kInt,
  kIdent,
  kTrue,
  kFalse,
  kLParen,
  kRParen,
  kBang,
  kMinus,
  kPlus,
  kStar,
  kOrOr,
  kAndAnd,
  kEqEq,
  kNotEq,
  kLt,
  kLe,
  kGt,
  kGe,
  kAssign,
  kEnd,
};

const char* spelling(Tok t) {
  switch (t) {
    case Tok::kInt: return "integer";
    case Tok::kIdent: return "identifier";
    case Tok::kTrue: return "'true'";
    case Tok::kFalse: return "'false'";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kBang: return "'!'";
    case Tok::kMinus: return "'-'";
    case Tok::kPlus: return "'+'";
    case Tok::kStar: return "'*'";
    case Tok::kOrOr: return "'||'";
    case Tok::kAndAnd: return "'&&'";
    case Tok::kEqEq: return "'=='";
    case Tok::kNotEq: return "'!='";
    case Tok::kLt: return "'<'";
    case Tok::kLe: return "'<='";
    case Tok::kGt: return "'>'";
    case Tok::kGe: return "'>='";
    case Tok::kAssign: return "'='";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::size_t pos;
  std::string_view text;
  std::int64_t value = 0;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, i, src.substr(i, len)});
    i += len;
  };
  while (i < src.size()) {
    auto c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    char next = i + 1 < src.size() ? src[i + 1] : '\0';
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      Token t{Tok::kInt, i, src.substr(i, j - i)};
      auto [p, ec] = std::from_chars(src.data() + i, src.data() + j, t.value);
      if (ec != std::errc{}) {
        throw SyntaxError(i, {}, "integer literal out of range");
      }
      out.push_back(t);
      i = j;
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      auto word = src.substr(i, j - i);
      Tok k = word == "true" ? Tok::kTrue : word == "false" ? Tok::kFalse : Tok::kIdent;
      push(k, j - i);
    } else {
      switch (c) {
        case '(': push(Tok::kLParen, 1); break;
        case ')': push(Tok::kRParen, 1); break;
        case '+': push(Tok::kPlus, 1); break;
        case '-': push(Tok::kMinus, 1); break;
        case '*': push(Tok::kStar, 1); break;
        case '!': next == '=' ? push(Tok::kNotEq, 2) : push(Tok::kBang, 1); break;
        case '=': next == '=' ? push(Tok::kEqEq, 2) : push(Tok::kAssign, 1); break;
        case '<': next == '=' ? push(Tok::kLe, 2) : push(Tok::kLt, 1); break;
        case '>': next == '=' ? push(Tok::kGe, 2) : push(Tok::kGt, 1); break;
        case '&':
          if (next != '&') throw SyntaxError(i, {"'&&'"}, "unexpected character '&'");
          push(Tok::kAndAnd, 2);
          break;
        case '|':
          if (next != '|') throw SyntaxError(i, {"'||'"}, "unexpected character '|'");
          push(Tok::kOrOr, 2);
          break;
        default:
          throw SyntaxError(i, {}, std::string("unexpected character '") +
                                       static_cast<char>(c) + "'");
      }
    }
  }
  out.push_back({Tok::kEnd, src.size(), {}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  ExprPtr expression() { return parse_or(); }

  Stmt statement() {
    const Token& t = peek();
    if (t.kind != Tok::kIdent) fail({Tok::kIdent});
    std::string target(t.text);
    ++pos_;
    expect(Tok::kAssign);
    return {std::move(target), parse_or()};
  }

  void finish() {
    if (peek().kind != Tok::kEnd) fail({Tok::kEnd});
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  void expect(Tok k) {
    if (!accept(k)) fail({k});
  }

  [[noreturn]] void fail(std::initializer_list<Tok> expected) const {
    std::vector<std::string> names;
    std::string msg = "expected ";
    for (Tok k : expected) {
      if (!names.empty()) msg += " or ";
      names.emplace_back(spelling(k));
      msg += names.back();
    }
    msg += ", found ";
    msg += peek().kind == Tok::kEnd ? "end of input"
                                    : "'" + std::string(peek().text) + "'";
    throw SyntaxError(peek().pos, std::move(names), msg);
  }

  ExprPtr parse_or() {
    auto lhs = parse_and();
    while (accept(Tok::kOrOr)) lhs = Expr::Binary(Op::kOr, lhs, parse_and());
    return lhs;
  }

  ExprPtr parse_and() {
    auto lhs = parse_cmp();
    while (accept(Tok::kAndAnd)) lhs = Expr::Binary(Op::kAnd, lhs, parse_cmp());
    return lhs;
  }

  ExprPtr parse_cmp() {
    auto lhs = parse_add();
    Op op;
    switch (peek().kind) {
      case Tok::kEqEq: op = Op::kEq; break;
      case Tok::kNotEq: op = Op::kNe; break;
      case Tok::kLt: op = Op::kLt; break;
      case Tok::kLe: op = Op::kLe; break;
      case Tok::kGt: op = Op::kGt; break;
      case Tok::kGe: op = Op::kGe; break;
      default: return lhs;
    }
    ++pos_;
    return Expr::Binary(op, lhs, parse_add());
  }

  ExprPtr parse_add() {
    auto lhs = parse_mul();
    for (;;) {
      if (accept(Tok::kPlus)) {
        lhs = Expr::Binary(Op::kAdd, lhs, parse_mul());
      } else if (accept(Tok::kMinus)) {
        lhs = Expr::Binary(Op::kSub, lhs, parse_mul());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_mul() {
    auto lhs = parse_unary();
    while (accept(Tok::kStar)) lhs = Expr::Binary(Op::kMul, lhs, parse_unary());
    return lhs;
  }

  ExprPtr parse_unary() {
    if (accept(Tok::kBang)) return Expr::Unary(Op::kNot, parse_unary());
    if (accept(Tok::kMinus)) return Expr::Unary(Op::kNegate, parse_unary());
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kInt:
        ++pos_;
        return Expr::Literal(t.value);
      case Tok::kTrue:
        ++pos_;
        return Expr::Literal(true);
      case Tok::kFalse:
        ++pos_;
        return Expr::Literal(false);
      case Tok::kIdent:
        ++pos_;
        return Expr::Variable(std::string(t.text));
      case Tok::kLParen: {
        ++pos_;
        auto inner = parse_or();
        expect(Tok::kRParen);
        return inner;
      }
      default:
        fail({Tok::kInt, Tok::kTrue, Tok::kFalse, Tok::kIdent, Tok::kLParen, Tok::kBang,
              Tok::kMinus});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

const char* op_text(Op op) {
  switch (op) {
    case Op::kNot: return "!";
    case Op::kNegate: return "-";
    case Op::kOr: return "||";
    case Op::kAnd: return "&&";
    case Op::kEq: return "==";
    case Op::kNe: return "!=";
    case Op::kLt: return "<";
    case Op::kLe: return "<=";
    case Op::kGt: return ">";
    case Op::kGe: return ">=";
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMul: return "*";
  }
  return "?";
}

int precedence(const Expr& e) {
  if (e.kind == Expr::Kind::kUnary) return 6;
  if (e.kind != Expr::Kind::kBinary) return 7;
  switch (e.op) {
    case Op::kOr: return 1;
    case Op::kAnd: return 2;
    case Op::kAdd:
    case Op::kSub: return 4;
    case Op::kMul: return 5;
    default: return 3;
  }
}

std::int64_t as_int(const Value& v, Op op) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw EvalError(EvalError::Kind::kTypeMismatch,
                  std::string("operator '") + op_text(op) + "' needs integer operands");
}

bool as_bool(const Value& v, Op op) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw EvalError(EvalError::Kind::kTypeMismatch,
                  std::string("operator '") + op_text(op) + "' needs boolean operands");
}

[[noreturn]] void overflow(Op op) {
  throw EvalError(EvalError::Kind::kOverflow,
                  std::string("integer overflow in '") + op_text(op) + "'");
}

}  // namespace

ExprPtr parse_guard(std::string_view text) {
  Parser p(text);
  auto e = p.expression();
  p.finish();
  return e;
}

Stmt parse_statement(std::string_view text) {
  Parser p(text);
  auto s = p.statement();
  p.finish();
  return s;
}

Value evaluate(const Expr& expr, const Context& ctx) {
  switch (expr.kind) {
    case Expr::Kind::kLiteral:
      return expr.literal;
    case Expr::Kind::kVariable: {
      auto it = ctx.find(expr.name);
      if (it == ctx.end()) {
        throw EvalError(EvalError::Kind::kUndefinedVariable,
                        "undefined variable '" + expr.name + "'");
      }
      return it->second;
    }
    case Expr::Kind::kUnary: {
      Value v = evaluate(*expr.lhs, ctx);
      if (expr.op == Op::kNot) return !as_bool(v, expr.op);
      std::int64_t i = as_int(v, expr.op);
      std::int64_t r;
      if (__builtin_sub_overflow(std::int64_t{0}, i, &r)) overflow(expr.op);
      return r;
    }
    case Expr::Kind::kBinary:
      break;
  }

  if (expr.op == Op::kAnd || expr.op == Op::kOr) {
    bool lhs = as_bool(evaluate(*expr.lhs, ctx), expr.op);
    if (expr.op == Op::kAnd && !lhs) return false;
    if (expr.op == Op::kOr && lhs) return true;
    return as_bool(evaluate(*expr.rhs, ctx), expr.op);
  }

  Value lhs = evaluate(*expr.lhs, ctx);
  Value rhs = evaluate(*expr.rhs, ctx);
  if (expr.op == Op::kEq || expr.op == Op::kNe) {
    if (lhs.index() != rhs.index()) {
      throw EvalError(EvalError::Kind::kTypeMismatch,
                      std::string("operator '") + op_text(expr.op) +
                          "' compares values of different types");
    }
    return (lhs == rhs) == (expr.op == Op::kEq);
  }

  std::int64_t a = as_int(lhs, expr.op);
  std::int64_t b = as_int(rhs, expr.op);
  std::int64_t r = 0;
  switch (expr.op) {
    case Op::kLt: return a < b;
    case Op::kLe: return a <= b;
    case Op::kGt: return a > b;
    case Op::kGe: return a >= b;
    case Op::kAdd:
      if (__builtin_add_overflow(a, b, &r)) overflow(expr.op);
      return r;
    case Op::kSub:
      if (__builtin_sub_overflow(a, b, &r)) overflow(expr.op);
      return r;
    case Op::kMul:
      if (__builtin_mul_overflow(a, b, &r)) overflow(expr.op);
      return r;
    default:
      break;
  }
  throw EvalError(EvalError::Kind::kTypeMismatch, "bad operator");
}

bool eval_guard(const Expr& expr, const Context& ctx) {
  Value v = evaluate(expr, ctx);
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw EvalError(EvalError::Kind::kNonBoolean,
                  "guard '" + to_string(expr) + "' evaluated to a non-boolean value");
}

Context apply_actions(std::span<const Stmt> stmts, const Context& ctx) {
  Context out = ctx;
  for (const Stmt& s : stmts) {
    Value v = evaluate(*s.value, out);
    out.insert_or_assign(s.target, v);
  }
  return out;
}

std::string to_string(const Value& value) {
  if (const auto* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
  return std::to_string(std::get<std::int64_t>(value));
}

std::string to_string(const Expr& expr) {
  switch (expr.kind) {
    case Expr::Kind::kLiteral:
      return to_string(expr.literal);
    case Expr::Kind::kVariable:
      return expr.name;
    case Expr::Kind::kUnary: {
      std::string inner = to_string(*expr.lhs);
      if (precedence(*expr.lhs) < 6) inner = "(" + inner + ")";
      return op_text(expr.op) + inner;
    }
    case Expr::Kind::kBinary:
      break;
  }
  int p = precedence(expr);
  std::string lhs = to_string(*expr.lhs);
  std::string rhs = to_string(*expr.rhs);
  // Comparisons do not chain, so a comparison operand of a comparison needs
  // parentheses on either side. Everything else is left-associative.
  int lp = precedence(*expr.lhs);
  if (lp < p || (p == 3 && lp == 3)) lhs = "(" + lhs + ")";
  if (precedence(*expr.rhs) <= p) rhs = "(" + rhs + ")";
  return lhs + " " + op_text(expr.op) + " " + rhs;
}

std::string to_string(const Stmt& stmt) { return stmt.target + " = " + to_string(*stmt.value); }

std::string context_digest(const Context& ctx) {
  std::string out;
  for (const auto& [name, value] : ctx) {
    if (!out.empty()) out += ';';
    out += name;
    out += '=';
    out += to_string(value);
  }
  return out;
}

}  // namespace mbt::guard
