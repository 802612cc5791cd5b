#include <cmath>
#include <map>

#include "doctest.h"
#include "pastlab/exploration.hpp"
#include "pastlab/transforms.hpp"
#include "support.hpp"

using namespace pastlab;

TEST_SUITE("transforms") {

TEST_CASE("Knievel form recognizer") {
  CHECK(is_knievel(parse_program("x := 1; while (x > 0) { x := x - 1 }")));
  CHECK(is_knievel(parse_program("{skip} <1/3> {exit}")));
  CHECK(is_knievel(parse_program("{skip} [] {x := 2}")));
  CHECK_FALSE(is_knievel(parse_program("{x := 1} <1/2> {exit}")));
  CHECK_FALSE(is_knievel(parse_program("{skip} <1/2> {skip}")));
  CHECK_FALSE(is_knievel(catalog::random_walk()));
  CHECK(is_knievel(catalog::geometric()));
}

TEST_CASE("to_knievel keeps terminating programs terminating") {
  ConstantScheduler ln(Direction::Ln);
  KnievelProgram k = to_knievel(parse_program("x := 1"));
  CHECK(is_knievel(k.program));
  CHECK(k.control_points == 1);
  RuntimeBounds b = exp_runtime_bounds(k.program, ln, 5000);
  CHECK(b.closed);
}

TEST_CASE("to_knievel of a spin loop has a growing runtime") {
  ConstantScheduler ln(Direction::Ln);
  KnievelProgram k = to_knievel(parse_program("while (true) { skip }"));
  CHECK(is_knievel(k.program));
  RuntimeBounds b = exp_runtime_bounds(k.program, ln, 2000);
  CHECK_FALSE(b.closed);
  CHECK(b.lower > 50);
}

TEST_CASE("to_knievel level base and options") {
  KnievelProgram k = to_knievel(parse_program("{x := 1} <1/3> {x := 2}; {skip} <1/4> {skip}"));
  CHECK(k.level_base == 12);
  KnievelOptions per_level;
  per_level.halving = KnievelOptions::Halving::PerLevel;
  CHECK(is_knievel(to_knievel(catalog::random_walk(), per_level).program));
  CHECK_THROWS_AS(to_knievel(parse_program("{skip} <x> {skip}")), std::invalid_argument);
}

TEST_CASE("tree specs") {
  TreeSpec t = TreeSpec::explicit_tree({{}, {0}, {1}, {0, 0}});
  CHECK(t.contains({0, 0}));
  CHECK_FALSE(t.contains({1, 0}));
  CHECK_THROWS_AS(TreeSpec::explicit_tree({{}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(TreeSpec::explicit_tree({{}, {-1}}), std::invalid_argument);
  CHECK_THROWS_AS(TreeSpec::explicit_tree({{0}}), std::invalid_argument);
  std::set<std::vector<long>> big = {{}};
  for (long i = 0; i < 5000; ++i) big.insert({i});
  CHECK_THROWS_AS(TreeSpec::explicit_tree(big), std::invalid_argument);

  TreeSpec zeros = TreeSpec::rule(TreeSpec::Kind::AllZeros);
  CHECK(zeros.contains({0, 0, 0}));
  CHECK_FALSE(zeros.contains({0, 1}));
  CHECK(TreeSpec::rule(TreeSpec::Kind::Full).contains({5, 9, 2}));
  TreeSpec two = TreeSpec::rule(TreeSpec::Kind::BoundedDepth, 2);
  CHECK(two.contains({7, 3}));
  CHECK_FALSE(two.contains({7, 3, 0}));
}

TEST_CASE("node encoding is injective per length") {
  for (std::size_t len = 0; len <= 3; ++len) {
    std::map<Integer, std::vector<long>> seen;
    std::vector<long> v(len, 0);
    for (;;) {
      auto [it, fresh] = seen.emplace(encode_node(v), v);
      CHECK(fresh);
      std::size_t i = 0;
      while (i < len && ++v[i] == 6) v[i++] = 0;
      if (i == len) break;
    }
    CHECK(seen.size() == (len == 0 ? 1u : static_cast<std::size_t>(std::pow(6, len))));
  }
}

TEST_CASE("ordinal of trees") {
  CHECK(ord_of_tree(TreeSpec::explicit_tree({{}})) == Ordinal());
  CHECK(ord_of_tree(TreeSpec::explicit_tree({{}, {0}, {1}, {0, 0}})) == Ordinal::from_natural(2));
  CHECK(ord_of_tree(TreeSpec::rule(TreeSpec::Kind::BoundedDepth, 3)) == Ordinal::from_natural(3));
  CHECK_THROWS(ord_of_tree(TreeSpec::rule(TreeSpec::Kind::AllZeros)));
  CHECK_THROWS(ord_of_tree(TreeSpec::rule(TreeSpec::Kind::Full)));
}

TEST_CASE("emitted programs are in Knievel form") {
  for (const TreeSpec& t : {TreeSpec::explicit_tree({{}}), TreeSpec::explicit_tree({{}, {0}, {2}}),
                            TreeSpec::rule(TreeSpec::Kind::AllZeros), TreeSpec::rule(TreeSpec::Kind::Full),
                            TreeSpec::rule(TreeSpec::Kind::BoundedDepth, 1)}) {
    CHECK(is_knievel(emit_tree_reduction(t)));
    CHECK(is_knievel(emit_ordinal_program(t)));
  }
}

TEST_CASE("reduction of the one-node tree terminates under the default answer") {
  ConstantScheduler ln(Direction::Ln);
  ProgramPtr p = emit_tree_reduction(TreeSpec::explicit_tree({{}}));
  SeriesProfile s = sweep(p, ln, 1000);
  CHECK(s.live.back() < pow2(-6));
  for (std::size_t j = 1; j < s.live.size(); ++j) CHECK(s.live[j] <= s.live[j - 1]);
}

}  // TEST_SUITE
