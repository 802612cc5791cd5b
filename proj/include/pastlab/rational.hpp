#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pastlab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Always "num/den", including integers ("3/1"). Used by every file format.
std::string to_fraction(const Rational& q);

/// Shortest exact form: "3", "-1/2".
std::string to_text(const Rational& q);

/// Accepts "n", "-n", "n/d", "-n/d". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

Integer parse_integer(std::string_view text);

Rational pow2(long exponent);

double approx(const Rational& q);

}  // namespace pastlab
