#include <random>

#include "doctest.h"
#include "pastlab/syntax.hpp"
#include "support.hpp"

using namespace pastlab;
using namespace pastlab::ast;

TEST_SUITE("syntax") {

TEST_CASE("random walk parses to the expected tree") {
  ProgramPtr p = parse_program("x := 1; while (x != 0) { x := x + 1 <1/2> x := x - 1 }");
  ProgramPtr want =
      seq(assign("x", lit(1)),
          loop(cmp(CmpOp::Ne, var("x"), lit(0)),
               prob(assign("x", add(var("x"), lit(1))), lit(Rational(1, 2)),
                    assign("x", sub(var("x"), lit(1))))));
  CHECK(equal(p, want));
}

TEST_CASE("single statements") {
  CHECK(parse_program("skip")->kind == Program::Kind::Skip);
  CHECK(print(parse_program("exit")) == "exit");
  CHECK(print(*skip()) == "skip");
  ProgramPtr n = parse_program("{ y := 0 } [] { y := 1 }");
  CHECK(equal(n, nondet(assign("y", lit(0)), assign("y", lit(1)))));
}

TEST_CASE("sequencing is right-nested") {
  ProgramPtr p = parse_program("skip; exit; x := 2");
  REQUIRE(p->kind == Program::Kind::Seq);
  CHECK(p->first->kind == Program::Kind::Skip);
  CHECK(p->second->kind == Program::Kind::Seq);
  CHECK(p->second->second->kind == Program::Kind::Assign);
}

TEST_CASE("literals are exact and reduced") {
  AExprPtr e = parse_aexpr("6/4");
  REQUIRE(e->kind == AExpr::Kind::Lit);
  CHECK(e->value == Rational(3, 2));
  CHECK(print(*e) == "3/2");
  CHECK(parse_aexpr("-1/2")->kind == AExpr::Kind::Neg);
  CHECK_THROWS_AS(parse_aexpr("1/0"), ParseError);
}

TEST_CASE("if without else and comments") {
  ProgramPtr p = parse_program("# setup\nif (x < 1) { x := 1 } # done\n");
  REQUIRE(p->kind == Program::Kind::If);
  CHECK(p->second->kind == Program::Kind::Empty);
}

TEST_CASE("boolean precedence and grouping") {
  BExprPtr b = parse_bexpr("not x = 0 and (y > 1 or (x) <= 2)");
  REQUIRE(b->kind == BExpr::Kind::And);
  CHECK(b->lhs->kind == BExpr::Kind::Not);
  CHECK(b->rhs->kind == BExpr::Kind::Or);
}

TEST_CASE("parse errors carry a position and expected tokens") {
  try {
    parse_program("x := 1;\nwhile (x != 0 { skip }");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 15);
    CHECK(e.expected.count("')'") == 1);
  }
  CHECK_THROWS_AS(parse_program(""), ParseError);
  CHECK_THROWS_AS(parse_program("x = 1"), ParseError);
  CHECK_THROWS_AS(parse_program("{ skip } <1/2>"), ParseError);
  CHECK_THROWS_AS(parse_program("1x := 2"), ParseError);
}

TEST_CASE("deep nesting is refused, not overflowed") {
  std::string s(50000, '(');
  CHECK_THROWS_AS(parse_aexpr(s), ParseError);
}

TEST_CASE("round trip over random programs") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    ProgramPtr p = testing::random_program(rng, 6);
    std::string text = print(p);
    ProgramPtr q = parse_program(text);
    INFO(text);
    REQUIRE(equal(p, q));
    CHECK(print(q) == text);
    CHECK(equal(parse_program(pretty(p)), p));
  }
}

TEST_CASE("arbitrary bytes never crash the parser") {
  std::mt19937_64 rng(2);
  const std::string alphabet = "xyz01/ :=;{}()[]<>+-*!#\n\twhileifelsandortruefalseskipexit\xff\x00";
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    std::size_t n = rng() % 40;
    for (std::size_t j = 0; j < n; ++j) s += alphabet[rng() % alphabet.size()];
    try {
      parse_program(s);
    } catch (const ParseError& e) {
      CHECK(e.line >= 1);
      CHECK(e.column >= 1);
    }
  }
}

TEST_CASE("variables and sizes") {
  ProgramPtr p = parse_program("x := y; while (z > 0) { z := z - 1 }");
  std::set<Symbol> vars;
  collect_variables(p, vars);
  CHECK(vars.size() == 3);
  CHECK(program_size(p) == 4);  // seq, assign, loop, assign
  CHECK_FALSE(has_variables(*parse_aexpr("1/2 * 3")));
  CHECK(has_variables(*parse_aexpr("1 + x")));
}

}  // TEST_SUITE
