#include <algorithm>
#include <random>

#include "doctest.h"
#include "pastlab/exploration.hpp"
#include "pastlab/hydra.hpp"
#include "pastlab/transforms.hpp"
#include "support.hpp"

using namespace pastlab;
using namespace pastlab::testing;

namespace {

Ordinal nat(long n) { return Ordinal::from_natural(n); }

// Same tree with the children of every node in a random order.
std::string shuffled(const HydraState& h, long v, std::mt19937_64& rng) {
  std::vector<std::string> parts;
  for (long c : h.node(v).children) {
    if (!h.node(c).alive) continue;
    std::string s = shuffled(h, c, rng);
    for (Integer m = 0; m < h.node(c).multiplicity; ++m) parts.push_back(s);
  }
  std::shuffle(parts.begin(), parts.end(), rng);
  std::string out = "(";
  for (const auto& p : parts) out += p;
  return out + ")";
}

}  // namespace

TEST_SUITE("hydra") {

TEST_CASE("ordinal of small hydras") {
  CHECK(HydraState::parse("()").ordinal() == nat(0));
  CHECK(HydraState::parse("(())").ordinal() == nat(1));
  CHECK(HydraState::parse("(()())").ordinal() == nat(2));
  CHECK(HydraState::parse("(()*3)").ordinal() == nat(3));
  CHECK(HydraState::parse("((()))").ordinal() == Ordinal::omega());
  CHECK(HydraState::parse("((())())").ordinal() == Ordinal::omega().successor());
  CHECK(HydraState::parse("(((()))())").ordinal() ==
        natural_sum(Ordinal::omega_pow(Ordinal::omega()), nat(1)));
  CHECK(HydraState::line(2).str() == "((()))");
}

TEST_CASE("heads and depths") {
  HydraState h = HydraState::parse("((())()*2)");
  CHECK(h.head_count() == 3);
  CHECK(h.node_count() == 5);
  CHECK(h.depth(leftmost_deepest(h)) == 2);
  CHECK(HydraState::parse("()").dead());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(HydraState::parse("(()"), std::invalid_argument);
  CHECK_THROWS_AS(HydraState::parse("())"), std::invalid_argument);
  CHECK_THROWS_AS(HydraState::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(HydraState::parse("(()*0)"), std::invalid_argument);
}

TEST_CASE("canonical form ignores child order and multiplicity") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    HydraState h = HydraState::parse(random_hydra(rng, 14));
    HydraState g = HydraState::parse(shuffled(h, h.root(), rng));
    CHECK(g.canonical() == h.canonical());
    CHECK(g.ordinal() == h.ordinal());
    HydraState e = h.expanded(1000);
    CHECK(e.canonical() == h.canonical());
    CHECK(e.head_count() == h.head_count());
  }
  CHECK(HydraState::parse("(()())").canonical() == HydraState::parse("(()*2)").canonical());
  CHECK(HydraState::parse("((())())").canonical() == HydraState::parse("(()(()))").canonical());
}

TEST_CASE("rounds near the root") {
  auto out = play_round(HydraState::parse("(())"), 1, 0);
  REQUIRE(out.size() == 1);
  CHECK(out[0].survived);
  CHECK(out[0].state.dead());
  CHECK(out[0].prob == 1);
  CHECK_THROWS_AS(play_round(HydraState::parse("(())"), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(play_round(HydraState::parse("((()))"), 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(play_round(HydraState::parse("((()))"), 2, -1), std::invalid_argument);
}

TEST_CASE("round with evolutions") {
  HydraState line = HydraState::line(2);
  auto out = play_round(line, leftmost_deepest(line), 2);
  REQUIRE(out.size() == 3);
  CHECK_FALSE(out[0].survived);
  CHECK(out[0].prob == Rational(1, 2));
  CHECK(out[1].prob == Rational(1, 4));
  CHECK(out[2].survived);
  CHECK(out[2].prob == Rational(1, 4));
  CHECK(out[2].state.head_count() == 64);
  CHECK(out[2].state.capacity() == 64);
  Rational total = 0;
  for (const auto& r : out) total += r.prob;
  CHECK(total == 1);
}

TEST_CASE("successor ordinals grow with the capacity") {
  // Chopping a head two levels down leaves (capacity) copies of the parent;
  // each evolution squares the capacity.
  HydraState line = HydraState::line(2);
  std::vector<Ordinal> want;
  for (long c : {4, 16, 64, 256}) want.push_back(nat(c));
  CHECK(successors_T(line, leftmost_deepest(line), 3) == want);

  HydraState h = HydraState::parse("((())())");
  std::vector<Ordinal> got = successors_T(h, leftmost_deepest(h), 2);
  CHECK(got == std::vector<Ordinal>{nat(5), nat(17), nat(65)});

  HydraState deep = HydraState::line(3);
  got = successors_T(deep, leftmost_deepest(deep), 1);
  CHECK(got == std::vector<Ordinal>{Ordinal::omega_pow(nat(4)), Ordinal::omega_pow(nat(16))});
}

TEST_CASE("every surviving round decreases the ordinal") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    HydraState h = HydraState::parse(random_hydra(rng, 10));
    if (h.dead()) continue;
    long head = leftmost_deepest(h);
    int e = h.depth(head) >= 2 ? static_cast<int>(rng() % 3) : 0;
    for (const RoundOutcome& r : play_round(h, head, e))
      if (r.survived) CHECK(r.state.ordinal() < h.ordinal());
  }
}

TEST_CASE("strategies") {
  CHECK(HerculesStrategy::parse("leftmost-deepest").kind == HerculesStrategy::Kind::LeftmostDeepest);
  HerculesStrategy s = HerculesStrategy::parse("scripted:2,1");
  CHECK(s.script == std::vector<long>{2, 1});
  CHECK(HerculesStrategy::parse("random:9").seed == 9);
  CHECK_THROWS(HerculesStrategy::parse("greedy"));
  HydraState h = HydraState::parse("((())())");
  CHECK(choose_head(HerculesStrategy{}, h, 0) == leftmost_deepest(h));
  HerculesStrategy r = HerculesStrategy::parse("random:9");
  for (std::size_t round = 0; round < 20; ++round) {
    CHECK(h.is_head(choose_head(r, h, round)));
    CHECK(random_pick(9, round) < 1024);
    CHECK(random_pick(9, round) == random_pick(9, round));
  }
}

TEST_CASE("compiled game follows the abstract rounds") {
  HydraState line = HydraState::line(2);
  HydraProgram prog = compile_to_pgcl(line, HerculesStrategy{}, 80);
  CHECK(is_knievel(prog.program));
  for (int e = 0; e <= 2; ++e) {
    SimulatedRound sim = simulate_round(prog, e);
    RoundOutcome abstract = play_round(line, leftmost_deepest(line), e).back();
    CHECK(sim.state.canonical() == abstract.state.canonical());
    CHECK(sim.prob == abstract.prob);
    CHECK(sim.steps > 0);
  }
  HydraProgram narrow = compile_to_pgcl(line, HerculesStrategy{}, 32);
  CHECK_THROWS_AS(simulate_round(narrow, 2), std::runtime_error);
  CHECK_THROWS_AS(compile_to_pgcl(line, HerculesStrategy{}, 1), std::invalid_argument);
}

}  // TEST_SUITE
