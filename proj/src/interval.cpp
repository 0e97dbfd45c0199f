#include "pingcert/interval.hpp"

#include <algorithm>
#include <array>

#include "pingcert/errors.hpp"

namespace pingcert {

RationalInterval::RationalInterval(const Rational& l, const Rational& h) : lo(l), hi(h) {
  if (lo > hi) throw InvalidInput("interval with lo > hi");
}

RationalInterval RationalInterval::rounded(unsigned long bits) const {
  return {round_down(lo, bits), round_up(hi, bits)};
}

std::string RationalInterval::to_string() const {
  return "[" + format_rational(lo) + "," + format_rational(hi) + "]";
}

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
  std::array<Rational, 4> p{a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return {*mn, *mx};
}

RationalInterval operator/(const RationalInterval& a, const RationalInterval& b) {
  if (b.contains(Rational(0))) throw InvalidInput("interval division by an interval containing 0");
  return a * RationalInterval(1 / b.hi, 1 / b.lo);
}

RationalInterval pow(const RationalInterval& a, unsigned long n) {
  if (n == 0) return RationalInterval(Rational(1));
  Rational plo = power(a.lo, n), phi = power(a.hi, n);
  if (n % 2 == 1 || a.lo >= 0) return {std::min(plo, phi), std::max(plo, phi)};
  if (a.hi <= 0) return {phi, plo};
  return {Rational(0), std::max(plo, phi)};
}

namespace {

bool perfect_square(const Rational& x, Rational& root) {
  if (x < 0) return false;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t())) return false;
  Integer n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  root = Rational(n, d);
  return true;
}

// floor(2^bits * x^(1/n)) for x >= 0.
Integer scaled_floor_root(const Rational& x, unsigned long n, unsigned long bits) {
  Integer num = x.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits * n);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den_mpz_t());
  Integer r;
  mpz_root(r.get_mpz_t(), q.get_mpz_t(), n);
  return r;
}

Rational dyadic(const Integer& m, unsigned long bits) {
  Rational r(m);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), bits);
  return r;
}

Rational root_lower(const Rational& x, unsigned long n, unsigned long bits) {
  if (x <= 0) return 0;
  return dyadic(scaled_floor_root(x, n, bits), bits);
}

Rational root_upper(const Rational& x, unsigned long n, unsigned long bits) {
  if (x <= 0) return 0;
  Integer m = scaled_floor_root(x, n, bits);
  Rational candidate = dyadic(m, bits);
  if (power(candidate, n) == x) return candidate;
  return dyadic(m + 1, bits);
}

bool exact_root(const Rational& x, unsigned long n, Rational& root) {
  if (x < 0) return false;
  Integer a, b;
  if (!mpz_root(a.get_mpz_t(), x.get_num_mpz_t(), n)) return false;
  if (!mpz_root(b.get_mpz_t(), x.get_den_mpz_t(), n)) return false;
  root = Rational(a, b);
  return true;
}

}  // namespace

RationalInterval sqrt_interval(const RationalInterval& a, unsigned long bits) {
  if (a.lo < 0) throw InvalidInput("square root of an interval with negative part");
  Rational r;
  Rational lo = perfect_square(a.lo, r) ? r : root_lower(a.lo, 2, bits);
  Rational hi = perfect_square(a.hi, r) ? r : root_upper(a.hi, 2, bits);
  return {lo, hi};
}

RationalInterval sqrt_interval(const Rational& a, unsigned long bits) {
  return sqrt_interval(RationalInterval(a), bits);
}

RationalInterval root_interval(const RationalInterval& a, unsigned long n, unsigned long bits) {
  if (n == 0) throw InvalidInput("zeroth root");
  if (n == 1) return a;
  if (a.lo < 0) throw InvalidInput("root of an interval with negative part");
  Rational r;
  Rational lo = exact_root(a.lo, n, r) ? r : root_lower(a.lo, n, bits);
  Rational hi = exact_root(a.hi, n, r) ? r : root_upper(a.hi, n, bits);
  return {lo, hi};
}

namespace {

// 2*atanh(t) for |t| < 1/2 via the odd series, with the tail bounded by
// 2|t|^(2N+3) / ((2N+3)(1 - t^2)).
RationalInterval two_atanh(const Rational& t, unsigned long bits) {
  if (t == 0) return RationalInterval(Rational(0));
  Rational t2 = t * t;
  Rational term = t;
  Rational sum = 0;
  Rational tol(1);
  mpq_div_2exp(tol.get_mpq_t(), tol.get_mpq_t(), bits + 4);
  for (unsigned long k = 0;; ++k) {
    sum += term / (2 * k + 1);
    Rational next = term * t2;
    Rational tail = 2 * abs(next) / ((2 * k + 3) * (1 - t2));
    term = round_down(next, bits + 16);  // truncation error is accounted for below
    if (tail < tol) {
      // Each rounding of `term` adds at most 2^-(bits+16); errors of earlier
      // terms are damped by t^2 < 1, so the sum is off by at most (k+1)^2 of them.
      Rational steps(static_cast<long>(k + 1));
      Rational slack = tail + 2 * steps * steps * dyadic(Integer(1), bits + 16);
      Rational value = 2 * sum;
      return RationalInterval(value - slack, value + slack).rounded(bits + 2);
    }
  }
}

}  // namespace

RationalInterval log_interval(const Rational& x, unsigned long bits) {
  if (x <= 0) throw InvalidInput("log of a nonpositive number");
  if (x == 1) return RationalInterval(Rational(0));
  // x = 2^k * y with y in [2/3, 4/3).
  long k = approx_log2(x);
  Rational y = x;
  if (k > 0) mpq_div_2exp(y.get_mpq_t(), y.get_mpq_t(), static_cast<unsigned long>(k));
  if (k < 0) mpq_mul_2exp(y.get_mpq_t(), y.get_mpq_t(), static_cast<unsigned long>(-k));
  while (y >= Rational(4, 3)) { y /= 2; ++k; }
  while (y < Rational(2, 3)) { y *= 2; --k; }
  unsigned long extra = 8 + static_cast<unsigned long>(approx_log2(Rational(std::labs(k) + 1)));
  RationalInterval log_y = two_atanh((y - 1) / (y + 1), bits + extra);
  RationalInterval log2 = two_atanh(Rational(1, 3), bits + extra);
  RationalInterval result = log_y + RationalInterval(Rational(k)) * log2;
  return result.rounded(bits);
}

RationalInterval log_interval(const RationalInterval& a, unsigned long bits) {
  if (a.lo <= 0) throw InvalidInput("log of an interval with nonpositive part");
  RationalInterval lo = log_interval(a.lo, bits);
  if (a.is_point()) return lo;
  RationalInterval hi = log_interval(a.hi, bits);
  return {lo.lo, hi.hi};
}

}  // namespace pingcert
