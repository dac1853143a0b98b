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

// Guard and action mini-language.
//
//   expr  := or
//   or    := and ("||" and)*
//   and   := cmp ("&&" cmp)*
//   cmp   := add (("=="|"!="|"<"|"<="|">"|">=") add)?
//   add   := mul (("+"|"-") mul)*
//   mul   := unary ("*" unary)*
//   unary := ("!"|"-") unary | atom
//   atom  := INT | "true" | "false" | IDENT | "(" expr ")"
//   stmt  := IDENT "=" expr
//
// Values are 64-bit signed integers or booleans. Arithmetic overflow is an
// evaluation error.

#ifndef MBT_GUARD_HPP_
#define MBT_GUARD_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mbt::guard {

using Value = std::variant<std::int64_t, bool>;

// Variable store. std::map keeps names sorted, which the context digest
// relies on.
using Context = std::map<std::string, Value, std::less<>>;

enum class Op {
  kNot,
  kNegate,
  kOr,
  kAnd,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kAdd,
  kSub,
  kMul,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { kLiteral, kVariable, kUnary, kBinary };

  Kind kind = Kind::kLiteral;
  Value literal{std::int64_t{0}};
  std::string name;  // kVariable
  Op op = Op::kAdd;  // kUnary, kBinary
  ExprPtr lhs;       // operand for kUnary
  ExprPtr rhs;

  static ExprPtr Literal(Value v);
  static ExprPtr Variable(std::string name);
  static ExprPtr Unary(Op op, ExprPtr operand);
  static ExprPtr Binary(Op op, ExprPtr lhs, ExprPtr rhs);
};

// Structural equality.
bool operator==(const Expr& a, const Expr& b);

struct Stmt {
  std::string target;
  ExprPtr value;
};

bool is_identifier(std::string_view name);

// Throws SyntaxError.
ExprPtr parse_guard(std::string_view text);
Stmt parse_statement(std::string_view text);

// Throws EvalError. && and || short-circuit.
Value evaluate(const Expr& expr, const Context& ctx);
bool eval_guard(const Expr& expr, const Context& ctx);

// Applies statements left to right on a copy of `ctx`.
Context apply_actions(std::span<const Stmt> stmts, const Context& ctx);

// Canonical text with the minimum parentheses needed to reparse to the same
// tree.
std::string to_string(const Expr& expr);
std::string to_string(const Stmt& stmt);
std::string to_string(const Value& value);

// Sorted `name=value` pairs joined by ';'.
std::string context_digest(const Context& ctx);

}  // namespace mbt::guard

#endif  // MBT_GUARD_HPP_
