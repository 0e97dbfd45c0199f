#pragma once

#include <string>

#include "pingcert/rational.hpp"

namespace pingcert {

// Closed interval [lo, hi] of rationals enclosing a real quantity. Every
// operation returns an enclosure of the exact result; where a result is
// irrational or too large, endpoints are rounded outward to dyadics.
struct RationalInterval {
  Rational lo;
  Rational hi;

  RationalInterval() = default;
  explicit RationalInterval(const Rational& point) : lo(point), hi(point) {}
  RationalInterval(const Rational& lo, const Rational& hi);

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool is_point() const { return lo == hi; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const RationalInterval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool overlaps(const RationalInterval& other) const { return lo <= other.hi && other.lo <= hi; }

  // Outward rounding to denominators 2^bits (no-op for endpoints already dyadic at that scale).
  RationalInterval rounded(unsigned long bits) const;

  std::string to_string() const;
  bool operator==(const RationalInterval&) const = default;
};

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator-(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator*(const RationalInterval& a, const RationalInterval& b);
// Throws InvalidInput when b contains zero.
RationalInterval operator/(const RationalInterval& a, const RationalInterval& b);
RationalInterval pow(const RationalInterval& a, unsigned long n);

// Square root of a nonnegative interval, exact on perfect squares, otherwise
// each endpoint within 2^-bits.
RationalInterval sqrt_interval(const RationalInterval& a, unsigned long bits);
// Integer n-th root, n >= 1.
RationalInterval root_interval(const RationalInterval& a, unsigned long n, unsigned long bits);
// Natural logarithm of a positive interval, endpoints within about 2^-bits.
RationalInterval log_interval(const RationalInterval& a, unsigned long bits);

RationalInterval sqrt_interval(const Rational& a, unsigned long bits);
RationalInterval log_interval(const Rational& a, unsigned long bits);

}  // namespace pingcert
