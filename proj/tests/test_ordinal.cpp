#include <map>
#include <random>

#include "doctest.h"
#include "pastlab/ordinal.hpp"
#include "support.hpp"

using namespace pastlab;
using namespace pastlab::testing;

namespace {

Ordinal nat(long n) { return Ordinal::from_natural(n); }
Ordinal w() { return Ordinal::omega(); }

// Ordinals below w^w as coefficient maps {exponent -> coefficient}. Order is
// lexicographic from the largest exponent; the natural sum adds coefficients.
using Poly = std::map<long, long, std::greater<>>;

Ordinal of_poly(const Poly& p) {
  Ordinal o;
  for (const auto& [e, c] : p) o = natural_sum(o, Ordinal::term(nat(e), c));
  return o;
}

int compare_poly(const Poly& a, const Poly& b) {
  auto i = a.begin(), j = b.begin();
  for (; i != a.end() && j != b.end(); ++i, ++j) {
    if (i->first != j->first) return i->first > j->first ? 1 : -1;
    if (i->second != j->second) return i->second > j->second ? 1 : -1;
  }
  if (i != a.end()) return 1;
  if (j != b.end()) return -1;
  return 0;
}

Poly random_poly(std::mt19937_64& rng) {
  Poly p;
  int terms = static_cast<int>(rng() % 4);
  for (int i = 0; i < terms; ++i) p[static_cast<long>(rng() % 4)] += 1 + static_cast<long>(rng() % 3);
  return p;
}

}  // namespace

TEST_SUITE("ordinal") {

TEST_CASE("naturals") {
  CHECK(Ordinal().is_zero());
  CHECK(nat(0).is_zero());
  CHECK(nat(7).is_finite());
  CHECK(nat(7).finite_value() == 7);
  CHECK(nat(7).successor() == nat(8));
  CHECK(natural_sum(nat(3), nat(4)) == nat(7));
  CHECK(nat(3) < nat(4));
  CHECK_THROWS_AS(w().finite_value(), std::domain_error);
}

TEST_CASE("omega and its powers") {
  CHECK(w() > nat(1000000));
  CHECK(w() == Ordinal::omega_pow(nat(1)));
  CHECK(Ordinal::omega_pow(nat(0)) == nat(1));
  CHECK(Ordinal::omega_pow(w()) > Ordinal::term(nat(5), 100));
  CHECK(Ordinal::term(nat(2), 3) > Ordinal::term(nat(2), 2));
  CHECK_FALSE(w().is_finite());
}

TEST_CASE("natural sum is not ordinal addition") {
  // 1 + w = w for ordinal addition, but the natural sum keeps both.
  Ordinal s = natural_sum(nat(1), w());
  CHECK(s == natural_sum(w(), nat(1)));
  CHECK(s == w().successor());
  CHECK(s > w());
  CHECK(natural_sum(w(), w()) == Ordinal::term(nat(1), 2));
}

TEST_CASE("printing and parsing") {
  CHECK(w().str() == "w");
  CHECK(nat(5).str() == "5");
  CHECK(Ordinal().str() == "0");
  Ordinal o = natural_sum(natural_sum(Ordinal::term(nat(2), 3), w()), nat(5));
  CHECK(Ordinal::parse(o.str()) == o);
  CHECK(Ordinal::parse("w^(w^(2)*1)*1") == Ordinal::omega_pow(Ordinal::omega_pow(nat(2))));
  CHECK(Ordinal::parse("w") == w());
  CHECK_THROWS(Ordinal::parse("w^2"));
  CHECK_THROWS(Ordinal::parse("w +"));
  CHECK_THROWS(Ordinal::parse("w^(1)*0"));
}

TEST_CASE("order and natural sum agree with coefficient vectors below w^w") {
  std::mt19937_64 rng(404);
  for (int i = 0; i < 3000; ++i) {
    Poly a = random_poly(rng), b = random_poly(rng);
    Ordinal x = of_poly(a), y = of_poly(b);
    int c = compare_poly(a, b);
    CHECK((x < y) == (c < 0));
    CHECK((x == y) == (c == 0));
    Poly s = a;
    for (const auto& [e, k] : b) s[e] += k;
    CHECK(natural_sum(x, y) == of_poly(s));
  }
}

TEST_CASE("laws on random ordinals below w^w^w") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Ordinal a = random_ordinal(rng), b = random_ordinal(rng), c = random_ordinal(rng);
    CHECK(natural_sum(a, b) == natural_sum(b, a));
    CHECK(natural_sum(natural_sum(a, b), c) == natural_sum(a, natural_sum(b, c)));
    CHECK(natural_sum(a, Ordinal()) == a);
    if (b < c) CHECK(natural_sum(a, b) < natural_sum(a, c));
    CHECK(a < a.successor());
    CHECK(Ordinal::parse(a.str()) == a);
    if (a < b && b < c) CHECK(a < c);
    CHECK(((a < b) + (a == b) + (b < a)) == 1);
  }
}

}  // TEST_SUITE
