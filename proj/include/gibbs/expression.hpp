#pragma once

// Expression language for user-supplied energy functions u(x).
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unary ('^' factor)?        right-associative
//   unary  := '-'? base
//   base   := number | 'x' | ident '(' expr ')' | '(' expr ')'
//
// A leading minus applied directly to a literal is folded into the literal,
// so "-2" parses as the number -2 rather than Neg(2).

#include <memory>
#include <string>
#include <string_view>
#include <variant>

namespace gibbs::expr {

enum class Function { ln, exp, sqrt, lgamma, digamma, trigamma, sin, cos };
enum class BinaryOp { add, sub, mul, div, pow };

struct Node;
using Ast = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Variable {};
struct Negate {
  Ast operand;
};
struct Binary {
  BinaryOp op;
  Ast lhs;
  Ast rhs;
};
struct Call {
  Function fn;
  Ast arg;
};

struct Node {
  std::variant<Number, Variable, Negate, Binary, Call> v;
};

std::string_view function_name(Function fn);

Ast parse(std::string_view text);

// Minimal-parenthesis rendering; parse(to_string(a)) is structurally equal to a.
std::string to_string(const Ast& ast);

bool structural_equal(const Ast& a, const Ast& b);

// Symbolic d/dx with literal constant folding and a few identity rewrites.
// Throws UnsupportedDerivative for trigamma.
Ast differentiate(const Ast& ast);

double evaluate(const Ast& ast, double x);

bool depends_on_x(const Ast& ast);

// Node builders. The simplifying ones fold literal arithmetic.
Ast number(double v);
Ast variable();
Ast negate(Ast a);
Ast add(Ast a, Ast b);
Ast sub(Ast a, Ast b);
Ast mul(Ast a, Ast b);
Ast div(Ast a, Ast b);
Ast pow(Ast a, Ast b);
Ast call(Function fn, Ast arg);

}  // namespace gibbs::expr
