#include <doctest.h>

#include <cmath>

#include "gibbs/errors.hpp"
#include "gibbs/expression.hpp"
#include "gibbs/special.hpp"

using namespace gibbs::expr;

TEST_CASE("grammar shapes") {
  CHECK(structural_equal(parse("x^2/2"), div(pow(variable(), number(2)), number(2))));
  CHECK(structural_equal(parse("lgamma(x+1)"), call(Function::lgamma, add(variable(), number(1)))));
  CHECK(structural_equal(parse("x*(ln(x))^2"), mul(variable(), pow(call(Function::ln, variable()), number(2)))));
  CHECK(to_string(parse("x*(ln(x))^2")) == "x*ln(x)^2");
}

TEST_CASE("power is right-associative and unary minus binds to the base") {
  CHECK(evaluate(parse("2^3^2"), 0.0) == 512.0);
  CHECK(evaluate(parse("-x^2"), 3.0) == 9.0);  // (-x)^2
  CHECK(evaluate(parse("-(x^2)"), 3.0) == -9.0);
  CHECK(evaluate(parse("1-x-2"), 5.0) == -6.0);
  CHECK(evaluate(parse("8/4/2"), 0.0) == 1.0);
}

TEST_CASE("print then parse round-trips") {
  for (const char* s : {"x^2/2", "lgamma(x+1)", "x*(ln(x))^2", "-x*ln(x)^2", "(x+1)*(x-1)/(x^2+1)", "2^x^0.5",
                        "-(x+2)", "x-(x-1)", "exp(-0.5*x)", "sqrt(x)*sin(x)+cos(x)", "1e-3*x", "x/(2*x)"}) {
    const Ast a = parse(s);
    CAPTURE(s);
    CHECK(structural_equal(parse(to_string(a)), a));
  }
}

TEST_CASE("parse errors carry an offset") {
  CHECK_THROWS_AS(parse(""), gibbs::ParseError);
  CHECK_THROWS_AS(parse("x+"), gibbs::ParseError);
  CHECK_THROWS_AS(parse("(x"), gibbs::ParseError);
  CHECK_THROWS_AS(parse("x)"), gibbs::ParseError);
  CHECK_THROWS_AS(parse("x\xc3\xa9"), gibbs::ParseError);
  try {
    parse("x + * 2");
    FAIL("expected a parse error");
  } catch (const gibbs::ParseError& e) {
    CHECK(e.offset() == 4);
  }
  try {
    parse("2*foo(x)");
    FAIL("expected an unknown identifier");
  } catch (const gibbs::UnknownIdentifier& e) {
    CHECK(e.name() == "foo");
    CHECK(e.offset() == 2);
  }
}

TEST_CASE("derivatives") {
  CHECK(to_string(differentiate(parse("x^2/2"))) == "x");
  CHECK(to_string(differentiate(parse("lgamma(x+1)"))) == "digamma(x+1)");
  CHECK(to_string(differentiate(parse("x*ln(x)"))) == "ln(x)+1");
  CHECK(structural_equal(differentiate(parse("7.5")), number(0)));
  CHECK(structural_equal(differentiate(parse("x")), number(1)));
  CHECK_THROWS_AS(differentiate(parse("trigamma(x)")), gibbs::UnsupportedDerivative);
}

TEST_CASE("derivatives agree with central differences") {
  for (const char* s : {"x*ln(x)^2", "exp(-0.5*x)*sin(x)", "sqrt(x)/(1+x)", "x^x", "cos(x^2)", "2^x", "-x^3"}) {
    const Ast f = parse(s);
    const Ast df = differentiate(f);
    for (double x : {0.7, 2.0, 5.5}) {
      const double h = 1e-5 * x;
      const double fd = (evaluate(f, x + h) - evaluate(f, x - h)) / (2 * h);
      CAPTURE(s);
      CAPTURE(x);
      CHECK(evaluate(df, x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("second derivative of lgamma(x+1) is trigamma") {
  const Ast dd = differentiate(differentiate(parse("lgamma(x+1)")));
  for (double x : {1.0, 5.0, 50.0}) CHECK(std::abs(evaluate(dd, x) - gibbs::special::trigamma(x + 1.0)) < 1e-10);
}

TEST_CASE("evaluation and dependence") {
  CHECK(evaluate(parse("ln(exp(x))"), 3.25) == doctest::Approx(3.25));
  CHECK(!depends_on_x(parse("2*ln(3)")));
  CHECK(depends_on_x(parse("2*ln(x)")));
  CHECK(function_name(Function::digamma) == "digamma");
}
