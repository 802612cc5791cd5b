#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "pastlab/rational.hpp"

namespace pastlab {

/// Ordinal below epsilon_0 in Cantor normal form:
/// w^(e1)*c1 + ... + w^(ek)*ck with e1 > ... > ek and ci >= 1.
class Ordinal {
 public:
  struct Term;

  Ordinal();  // zero
  static Ordinal from_natural(const Integer& n);
  static Ordinal omega_pow(const Ordinal& exponent);
  static Ordinal term(const Ordinal& exponent, const Integer& coefficient);
  static Ordinal omega();

  bool is_zero() const;
  bool is_finite() const;
  /// Value of a finite ordinal. Throws std::domain_error otherwise.
  Integer finite_value() const;
  Ordinal successor() const;

  const std::vector<Term>& terms() const { return terms_; }

  /// Hessenberg natural sum: commutative, associative, strictly monotone.
  friend Ordinal natural_sum(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

  /// "w^(E)*c + ... + n"; w alone prints as "w".
  std::string str() const;
  static Ordinal parse(std::string_view text);

 private:
  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  Integer coefficient;
};

Ordinal natural_sum(const Ordinal& a, const Ordinal& b);

}  // namespace pastlab
