#include <catch2/catch_amalgamated.hpp>

#include "nsg/expr.hpp"

using namespace nsg;
using Catch::Matchers::WithinAbs;

namespace {
double ev(const char* s, Point p = {0.5, -0.25, 2.0, 3.0}) { return eval_scalar(parse(s), p); }
}  // namespace

TEST_CASE("precedence and associativity", "[expr]") {
  CHECK(ev("1 + 2*3") == 7.0);
  CHECK(ev("2^3") == 8.0);
  CHECK(ev("(2^3)^2") == 64.0);
  CHECK(ev("-2^2") == -4.0);
  CHECK(ev("8/4/2") == 1.0);
  CHECK(ev("10 - 4 - 3") == 3.0);
  CHECK(ev("(1 + 2)*3") == 9.0);
  CHECK_THAT(ev("2.5e-1 + 1E1"), WithinAbs(10.25, 1e-15));
}

TEST_CASE("variables follow u, v, x, y order", "[expr]") {
  Point p{1, 2, 3, 4};
  CHECK(ev("u", p) == 1.0);
  CHECK(ev("v", p) == 2.0);
  CHECK(ev("x", p) == 3.0);
  CHECK(ev("y", p) == 4.0);
  CHECK(ev("u*v + x^2*y", p) == 38.0);
}

TEST_CASE("elementary functions", "[expr]") {
  Point p{0.3, 0.7, -0.2, 1.1};
  CHECK_THAT(ev("exp(u) * ln(v) + sin(x) - cos(y)", p),
             WithinAbs(std::exp(0.3) * std::log(0.7) + std::sin(-0.2) - std::cos(1.1), 1e-15));
}

TEST_CASE("print round trips", "[expr]") {
  for (const char* s : {"u*v + x^2*y", "-(u - v)/(x + 2)", "exp(-u^2)*sin(x*y)", "(u^2)^3", "1e-05*u"}) {
    Expr e = parse(s);
    Expr back = parse(print(e));
    Point p{0.4, -0.6, 0.9, 1.3};
    CHECK(eval_scalar(back, p) == eval_scalar(e, p));
  }
}

TEST_CASE("parse errors carry offsets", "[expr]") {
  CHECK_THROWS_AS(parse("u + "), ParseError);
  CHECK_THROWS_AS(parse("foo(u)"), ParseError);
  CHECK_THROWS_AS(parse("(u + v"), ParseError);
  CHECK_THROWS_AS(parse("u v"), ParseError);
  CHECK_THROWS_AS(parse("u^0.5"), ParseError);
  CHECK_THROWS_AS(parse("2^3^2"), ParseError);
  CHECK_THROWS_AS(parse("u^x"), ParseError);
  try {
    parse("u + * v");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("domain errors", "[expr]") {
  CHECK_THROWS_AS(ev("ln(0)"), DomainError);
  CHECK_THROWS_AS(ev("ln(-u)", {1, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(ev("1/(u - u)"), DomainError);
}

TEST_CASE("dependence and substitution", "[expr]") {
  Expr e = parse("u*x + sin(y)");
  CHECK(depends_on(e, 0));
  CHECK_FALSE(depends_on(e, 1));
  CHECK(depends_on(e, 3));
  Expr s = substitute(e, {parse("v + 1"), make_var(1), make_num(2.0), make_num(0.0)});
  CHECK(ev(print(s).c_str(), {0, 3, 0, 0}) == 8.0);
  CHECK_FALSE(depends_on(s, 0));
}
