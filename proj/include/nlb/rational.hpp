#pragma once

#include <gmpxx.h>

#include <string>

namespace nlb {

// All probabilities and inequality values are exact rationals. GMP keeps
// them canonical (gcd 1, positive denominator) through arithmetic, so the
// only places that need care are construction and parsing.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

// Accepts "p", "p/q", and plain decimals like "-0.125" (read as the exact
// fraction -125/1000 before reduction). No exponents, no whitespace.
Rational parse_rational(const std::string& text);

// Canonical form: "p/q" with q > 0, "/q" omitted when q == 1.
std::string to_string(const Rational& value);

// Decimal rendering used by the CLI's --float switch.
std::string to_float_string(const Rational& value, int significant_digits = 12);

Rational pow_rational(const Rational& base, unsigned exponent);
Rational abs_rational(const Rational& value);

} // namespace nlb
