#include <random>

#include "doctest.h"
#include "pastlab/scheduling.hpp"
#include "pastlab/semantics.hpp"
#include "support.hpp"

using namespace pastlab;

namespace {

class CountingScheduler : public Scheduler {
 public:
  Direction decide(const History&, SiteId) override {
    ++calls;
    return Direction::Ln;
  }
  int calls = 0;
};

ExecState at(const std::string& program, const Valuation& v = Valuation(), const History& w = History()) {
  ExecState s = initial_state(parse_program(program), v);
  s.history = w;
  return s;
}

}  // namespace

TEST_SUITE("semantics") {

TEST_CASE("expression evaluation") {
  Valuation v = Valuation().set("x", 3);
  CHECK(eval(*parse_aexpr("x + 1"), v) == 4);
  CHECK(eval(*parse_aexpr("y"), Valuation()) == 0);
  CHECK(eval(*parse_aexpr("2 * x - 1/2"), Valuation().set("x", Rational(1, 4))) == 0);
  CHECK(eval(*parse_bexpr("x != 0"), Valuation().set("x", 1)));
  CHECK_FALSE(eval(*parse_bexpr("x != 0"), Valuation()));
  CHECK(eval(*parse_bexpr("x + y = 0"), Valuation().set("x", 1).set("y", -1)));
}

TEST_CASE("valuations are persistent and drop zeros") {
  Valuation a = Valuation().set("x", 2);
  Valuation b = a.set("x", 5);
  CHECK(a.get("x") == 2);
  CHECK(b.get("x") == 5);
  CHECK(a.set("x", 0) == Valuation());
  CHECK(a.sorted().size() == 1);
}

TEST_CASE("assignment steps once") {
  CountingScheduler f;
  auto out = step(at("x := 1; while (x != 0) { x := x - 1 }"), f);
  REQUIRE(out.size() == 1);
  CHECK(out[0].kind == StepKind::Deterministic);
  CHECK(out[0].state.program->kind == Program::Kind::Seq);
  CHECK(out[0].state.program->first->kind == Program::Kind::Empty);
  CHECK(out[0].state.valuation.get("x") == 1);
  CHECK(out[0].state.prob == 1);
  CHECK(out[0].state.history.size() == 0);
}

TEST_CASE("probabilistic choice returns both branches") {
  CountingScheduler f;
  auto out = step(at("{x := 1} <1/2> {x := 2}"), f);
  REQUIRE(out.size() == 2);
  CHECK(out[0].kind == StepKind::ProbLeft);
  CHECK(out[1].kind == StepKind::ProbRight);
  CHECK(out[0].state.prob == Rational(1, 2));
  CHECK(out[1].state.prob == Rational(1, 2));
  CHECK(out[0].state.history.str() == "Lp");
  CHECK(out[1].state.history.str() == "Rp");
}

TEST_CASE("forced probabilistic choices still extend the history") {
  CountingScheduler f;
  auto low = step(at("{skip} <x> {exit}"), f);
  REQUIRE(low.size() == 1);
  CHECK(low[0].state.history.str() == "Rp");
  CHECK(low[0].state.program->kind == Program::Kind::Exit);
  CHECK(low[0].state.prob == 1);
  auto high = step(at("{skip} <x> {exit}", Valuation().set("x", 3)), f);
  REQUIRE(high.size() == 1);
  CHECK(high[0].state.history.str() == "Lp");
  CHECK(high[0].state.program->kind == Program::Kind::Skip);
}

TEST_CASE("nondeterminism consults the scheduler") {
  ConstantScheduler rn(Direction::Rn);
  auto out = step(at("{y := 0} [] {y := 1}", Valuation(), History::parse("Lp")), rn);
  REQUIRE(out.size() == 1);
  CHECK(out[0].kind == StepKind::Nondet);
  CHECK(print(out[0].state.program) == "y := 1");
  CHECK(out[0].state.history.str() == "LpRn");
}

TEST_CASE("exit drops the whole continuation") {
  CountingScheduler f;
  ExecState s = at("exit; x := 1; while (true) { skip }", Valuation().set("z", 2), History::parse("Rn"));
  s.prob = Rational(1, 4);
  auto out = step(s, f);
  REQUIRE(out.size() == 1);
  CHECK(is_terminal(out[0].state.program));
  CHECK(out[0].state.valuation.get("z") == 2);
  CHECK(out[0].state.prob == Rational(1, 4));
  CHECK(out[0].state.history.str() == "Rn");
}

TEST_CASE("terminal states") {
  CHECK(is_terminal(ast::empty()));
  CHECK_FALSE(is_terminal(ast::skip()));
  CHECK_FALSE(is_terminal(ast::seq(ast::empty(), ast::skip())));
  CountingScheduler f;
  CHECK_THROWS_AS(step(initial_state(ast::empty()), f), std::logic_error);
}

TEST_CASE("conditionals and loops take one step to decide") {
  CountingScheduler f;
  CHECK(print(step(at("if (x = 0) { x := 1 } else { skip }"), f)[0].state.program) == "x := 1");
  CHECK(is_terminal(step(at("while (x > 0) { skip }"), f)[0].state.program));
  auto enter = step(at("while (x = 0) { skip }"), f);
  CHECK(enter[0].state.program->kind == Program::Kind::Seq);
}

TEST_CASE("properties over random programs") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    ProgramPtr p = testing::random_program(rng, 5);
    auto f = random_scheduler(rng());
    ExecState s = initial_state(p);
    for (int d = 0; d < 30 && !is_terminal(s.program); ++d) {
      auto a = step(s, *f);
      auto b = step(s, *f);
      Rational mass = 0;
      REQUIRE(a.size() == b.size());
      for (std::size_t j = 0; j < a.size(); ++j) {
        mass += a[j].state.prob;
        CHECK(a[j].state.prob > 0);
        CHECK(print(a[j].state.program) == print(b[j].state.program));
        CHECK(a[j].state.valuation == b[j].state.valuation);
        // History grows by one exactly at choices.
        std::size_t grow = a[j].state.history.size() - s.history.size();
        bool choice = a[j].kind != StepKind::Deterministic;
        Transition t = transition(s.program, s.valuation);
        if (t.forced_prob) choice = true;
        CHECK(grow == (choice ? 1u : 0u));
        CHECK(a[j].state.history.prefix(s.history.size()) == s.history);
      }
      CHECK(mass == s.prob);
      s = a[rng() % a.size()].state;
    }
  }
}

TEST_CASE("programs without nondeterminism never ask the scheduler") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    ProgramPtr p = testing::random_program(rng, 5);
    if (print(p).find("[]") != std::string::npos) continue;
    CountingScheduler f;
    ExecState s = initial_state(p);
    for (int d = 0; d < 30 && !is_terminal(s.program); ++d) {
      auto out = step(s, f);
      Transition t = transition(s.program, s.valuation);
      CHECK(out.size() == (t.kind == Transition::Kind::Probabilistic ? 2u : 1u));
      s = out.back().state;
    }
    CHECK(f.calls == 0);
  }
}

TEST_CASE("state keys") {
  ProgramState s{parse_program("x := y"), Valuation().set("y", Rational(1, 2)).set("a", 3)};
  CHECK(state_key(s) == "x := y | a=3, y=1/2");
}

}  // TEST_SUITE
