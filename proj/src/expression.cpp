#include "gibbs/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "gibbs/errors.hpp"
#include "gibbs/special.hpp"

namespace gibbs::expr {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct FunctionEntry {
  std::string_view name;
  Function fn;
};

constexpr std::array<FunctionEntry, 8> kFunctions{{{"ln", Function::ln},
                                                   {"exp", Function::exp},
                                                   {"sqrt", Function::sqrt},
                                                   {"lgamma", Function::lgamma},
                                                   {"digamma", Function::digamma},
                                                   {"trigamma", Function::trigamma},
                                                   {"sin", Function::sin},
                                                   {"cos", Function::cos}}};

Ast make(Node n) { return std::make_shared<const Node>(std::move(n)); }
Ast raw_binary(BinaryOp op, Ast a, Ast b) { return make({Binary{op, std::move(a), std::move(b)}}); }

const double* as_number(const Ast& a) {
  const auto* n = std::get_if<Number>(&a->v);
  return n ? &n->value : nullptr;
}

bool is_value(const Ast& a, double v) {
  const double* n = as_number(a);
  return n != nullptr && *n == v;
}

const Binary* as_binary(const Ast& a, BinaryOp op) {
  const auto* b = std::get_if<Binary>(&a->v);
  return (b != nullptr && b->op == op) ? b : nullptr;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Ast run() {
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if (static_cast<unsigned char>(s_[i]) > 127) throw ParseError("non-ASCII character", i);
    }
    skip_space();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
    Ast e = expr();
    skip_space();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "', got end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Ast expr() {
    Ast lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = raw_binary(BinaryOp::add, lhs, term());
      } else if (accept('-')) {
        lhs = raw_binary(BinaryOp::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Ast term() {
    Ast lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = raw_binary(BinaryOp::mul, lhs, factor());
      } else if (accept('/')) {
        lhs = raw_binary(BinaryOp::div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  Ast factor() {
    Ast base = unary();
    if (accept('^')) return raw_binary(BinaryOp::pow, base, factor());
    return base;
  }

  Ast unary() {
    if (accept('-')) {
      Ast operand = base();
      if (const double* v = as_number(operand)) return number(-*v);
      return make({Negate{operand}});
    }
    return base();
  }

  Ast base() {
    skip_space();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Ast e = expr();
      expect(')');
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Ast literal() {
    const std::size_t start = pos_;
    double value = 0.0;
    const auto [end, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), value);
    if (ec == std::errc::result_out_of_range) throw ParseError("number out of range", start);
    if (ec != std::errc()) throw ParseError("malformed number", start);
    pos_ = static_cast<std::size_t>(end - s_.data());
    return number(value);
  }

  Ast identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name == "x") return variable();
    for (const auto& entry : kFunctions) {
      if (entry.name == name) {
        expect('(');
        Ast arg = expr();
        expect(')');
        return make({Call{entry.fn, arg}});
      }
    }
    throw UnknownIdentifier(std::string(name), start);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// --------------------------------------------------------------- printer

// Binding levels: 1 sum, 2 product, 3 power, 4 unary, 5 atom.
int level(const Ast& a) {
  return std::visit(overloaded{[](const Number& n) { return std::signbit(n.value) ? 4 : 5; },
                               [](const Variable&) { return 5; },
                               [](const Negate&) { return 4; },
                               [](const Call&) { return 5; },
                               [](const Binary& b) {
                                 switch (b.op) {
                                   case BinaryOp::add:
                                   case BinaryOp::sub:
                                     return 1;
                                   case BinaryOp::mul:
                                   case BinaryOp::div:
                                     return 2;
                                   case BinaryOp::pow:
                                     return 3;
                                 }
                                 return 1;
                               }},
                    a->v);
}

void render(const Ast& a, std::string& out);

void render_at(const Ast& a, int min_level, std::string& out) {
  if (level(a) < min_level) {
    out += '(';
    render(a, out);
    out += ')';
  } else {
    render(a, out);
  }
}

void render(const Ast& a, std::string& out) {
  std::visit(overloaded{[&](const Number& n) {
                          std::array<char, 32> buf{};
                          auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
                          out.append(buf.data(), res.ptr);
                        },
                        [&](const Variable&) { out += 'x'; },
                        [&](const Negate& n) {
                          out += '-';
                          render_at(n.operand, 5, out);
                        },
                        [&](const Call& c) {
                          out += function_name(c.fn);
                          out += '(';
                          render(c.arg, out);
                          out += ')';
                        },
                        [&](const Binary& b) {
                          switch (b.op) {
                            case BinaryOp::add:
                            case BinaryOp::sub:
                              render_at(b.lhs, 1, out);
                              out += b.op == BinaryOp::add ? '+' : '-';
                              render_at(b.rhs, 2, out);
                              break;
                            case BinaryOp::mul:
                            case BinaryOp::div:
                              render_at(b.lhs, 2, out);
                              out += b.op == BinaryOp::mul ? '*' : '/';
                              render_at(b.rhs, 3, out);
                              break;
                            case BinaryOp::pow:
                              render_at(b.lhs, 4, out);
                              out += '^';
                              render_at(b.rhs, 3, out);
                              break;
                          }
                        }},
             a->v);
}

double apply(Function fn, double v) {
  switch (fn) {
    case Function::ln:
      return std::log(v);
    case Function::exp:
      return std::exp(v);
    case Function::sqrt:
      return std::sqrt(v);
    case Function::lgamma:
      return special::log_gamma(v);
    case Function::digamma:
      return special::digamma(v);
    case Function::trigamma:
      return special::trigamma(v);
    case Function::sin:
      return std::sin(v);
    case Function::cos:
      return std::cos(v);
  }
  return std::nan("");
}

double apply(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::add:
      return a + b;
    case BinaryOp::sub:
      return a - b;
    case BinaryOp::mul:
      return a * b;
    case BinaryOp::div:
      return a / b;
    case BinaryOp::pow:
      return std::pow(a, b);
  }
  return std::nan("");
}

}  // namespace

std::string_view function_name(Function fn) {
  for (const auto& entry : kFunctions) {
    if (entry.fn == fn) return entry.name;
  }
  return "?";
}

Ast parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const Ast& ast) {
  std::string out;
  render(ast, out);
  return out;
}

bool structural_equal(const Ast& a, const Ast& b) {
  if (a == b) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{[&](const Number& n) { return n.value == std::get<Number>(b->v).value; },
                 [&](const Variable&) { return true; },
                 [&](const Negate& n) { return structural_equal(n.operand, std::get<Negate>(b->v).operand); },
                 [&](const Call& c) {
                   const auto& o = std::get<Call>(b->v);
                   return c.fn == o.fn && structural_equal(c.arg, o.arg);
                 },
                 [&](const Binary& x) {
                   const auto& o = std::get<Binary>(b->v);
                   return x.op == o.op && structural_equal(x.lhs, o.lhs) && structural_equal(x.rhs, o.rhs);
                 }},
      a->v);
}

bool depends_on_x(const Ast& ast) {
  return std::visit(overloaded{[](const Number&) { return false; },
                               [](const Variable&) { return true; },
                               [](const Negate& n) { return depends_on_x(n.operand); },
                               [](const Call& c) { return depends_on_x(c.arg); },
                               [](const Binary& b) { return depends_on_x(b.lhs) || depends_on_x(b.rhs); }},
                    ast->v);
}

double evaluate(const Ast& ast, double x) {
  return std::visit(overloaded{[](const Number& n) { return n.value; },
                               [x](const Variable&) { return x; },
                               [x](const Negate& n) { return -evaluate(n.operand, x); },
                               [x](const Call& c) { return apply(c.fn, evaluate(c.arg, x)); },
                               [x](const Binary& b) {
                                 return apply(b.op, evaluate(b.lhs, x), evaluate(b.rhs, x));
                               }},
                    ast->v);
}

Ast number(double v) { return make({Number{v}}); }
Ast variable() { return make({Variable{}}); }

Ast negate(Ast a) {
  if (const double* v = as_number(a)) return number(-*v);
  if (const auto* n = std::get_if<Negate>(&a->v)) return n->operand;
  return make({Negate{std::move(a)}});
}

Ast add(Ast a, Ast b) {
  const double* x = as_number(a);
  const double* y = as_number(b);
  if (x && y) return number(*x + *y);
  if (is_value(a, 0.0)) return b;
  if (is_value(b, 0.0)) return a;
  return raw_binary(BinaryOp::add, std::move(a), std::move(b));
}

Ast sub(Ast a, Ast b) {
  const double* x = as_number(a);
  const double* y = as_number(b);
  if (x && y) return number(*x - *y);
  if (is_value(b, 0.0)) return a;
  if (is_value(a, 0.0)) return negate(std::move(b));
  return raw_binary(BinaryOp::sub, std::move(a), std::move(b));
}

Ast mul(Ast a, Ast b) {
  const double* x = as_number(a);
  const double* y = as_number(b);
  if (x && y) return number(*x * *y);
  if (is_value(a, 0.0) || is_value(b, 0.0)) return number(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  if (is_value(a, -1.0)) return negate(std::move(b));
  if (is_value(b, -1.0)) return negate(std::move(a));
  if (y != nullptr) return mul(std::move(b), std::move(a));  // literal first
  if (x != nullptr) {
    if (const Binary* m = as_binary(b, BinaryOp::mul)) {
      if (const double* z = as_number(m->lhs)) return mul(number(*x * *z), m->rhs);
    }
  }
  // a * (c / a) -> c
  if (const Binary* d = as_binary(b, BinaryOp::div); d && structural_equal(d->rhs, a)) return d->lhs;
  if (const Binary* d = as_binary(a, BinaryOp::div); d && structural_equal(d->rhs, b)) return d->lhs;
  return raw_binary(BinaryOp::mul, std::move(a), std::move(b));
}

Ast div(Ast a, Ast b) {
  const double* x = as_number(a);
  const double* y = as_number(b);
  if (x && y) return number(*x / *y);
  if (is_value(a, 0.0)) return number(0.0);
  if (is_value(b, 1.0)) return a;
  if (y != nullptr) {
    if (const Binary* m = as_binary(a, BinaryOp::mul)) {
      if (const double* z = as_number(m->lhs)) return mul(number(*z / *y), m->rhs);
    }
  }
  return raw_binary(BinaryOp::div, std::move(a), std::move(b));
}

Ast pow(Ast a, Ast b) {
  const double* x = as_number(a);
  const double* y = as_number(b);
  if (x && y) return number(std::pow(*x, *y));
  if (is_value(b, 1.0)) return a;
  if (is_value(b, 0.0)) return number(1.0);
  return raw_binary(BinaryOp::pow, std::move(a), std::move(b));
}

Ast call(Function fn, Ast arg) {
  if (const double* v = as_number(arg)) return number(apply(fn, *v));
  return make({Call{fn, std::move(arg)}});
}

Ast differentiate(const Ast& ast) {
  return std::visit(
      overloaded{
          [](const Number&) { return number(0.0); },
          [](const Variable&) { return number(1.0); },
          [](const Negate& n) { return negate(differentiate(n.operand)); },
          [](const Call& c) -> Ast {
            const Ast& f = c.arg;
            const Ast df = differentiate(f);
            Ast outer;
            switch (c.fn) {
              case Function::ln:
                return div(df, f);
              case Function::exp:
                outer = call(Function::exp, f);
                break;
              case Function::sqrt:
                return div(df, mul(number(2.0), call(Function::sqrt, f)));
              case Function::lgamma:
                outer = call(Function::digamma, f);
                break;
              case Function::digamma:
                outer = call(Function::trigamma, f);
                break;
              case Function::trigamma:
                throw UnsupportedDerivative("trigamma");
              case Function::sin:
                outer = call(Function::cos, f);
                break;
              case Function::cos:
                outer = negate(call(Function::sin, f));
                break;
            }
            return mul(outer, df);
          },
          [](const Binary& b) -> Ast {
            const Ast& f = b.lhs;
            const Ast& g = b.rhs;
            switch (b.op) {
              case BinaryOp::add:
                return add(differentiate(f), differentiate(g));
              case BinaryOp::sub:
                return sub(differentiate(f), differentiate(g));
              case BinaryOp::mul:
                return add(mul(differentiate(f), g), mul(f, differentiate(g)));
              case BinaryOp::div:
                if (!depends_on_x(g)) return div(differentiate(f), g);
                return div(sub(mul(differentiate(f), g), mul(f, differentiate(g))), pow(g, number(2.0)));
              case BinaryOp::pow: {
                if (!depends_on_x(g)) {
                  return mul(mul(g, pow(f, sub(g, number(1.0)))), differentiate(f));
                }
                const Ast self = raw_binary(BinaryOp::pow, f, g);
                if (!depends_on_x(f)) return mul(mul(self, call(Function::ln, f)), differentiate(g));
                // f^g (g' ln f + g f' / f)
                return mul(self, add(mul(differentiate(g), call(Function::ln, f)),
                                     div(mul(g, differentiate(f)), f)));
              }
            }
            return number(0.0);
          }},
      ast->v);
}

}  // namespace gibbs::expr
