#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace pingcert {

using Integer = mpz_class;
using Rational = mpq_class;

// "p/q" in lowest terms, or "p" when q = 1.
std::string format_rational(const Rational& x);

// Accepts "p/q", "p" with optional sign. Throws InvalidInput.
Rational parse_rational(std::string_view text);

inline int sign(const Rational& x) { return sgn(x); }

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);

Rational power(const Rational& x, unsigned long n);

// The rational of least denominator (then least magnitude) in [lo, hi].
Rational simplest_between(const Rational& lo, const Rational& hi);

// Dyadic roundings with denominator 2^bits.
Rational round_down(const Rational& x, unsigned long bits);
Rational round_up(const Rational& x, unsigned long bits);

// Smallest power of two (as Rational) that is >= |x|, at least 1.
Rational power_of_two_above(const Rational& x);

// Approximate base-2 magnitude, used only to pick precisions.
long approx_log2(const Rational& x);

double to_double(const Rational& x);

}  // namespace pingcert
