#include "pingcert/rational.hpp"

#include <cctype>

#include "pingcert/errors.hpp"

namespace pingcert {

std::string format_rational(const Rational& v) {
  Rational x = v;
  x.canonicalize();
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

namespace {

bool valid_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer to_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den.front() == '-' || den.front() == '+')
    throw InvalidInput("malformed fraction \"" + std::string(text) + "\"");
  Integer d = to_integer(den);
  if (d == 0) throw InvalidInput("zero denominator in \"" + std::string(text) + "\"");
  Rational q(to_integer(num), d);
  q.canonicalize();
  return q;
}

Integer floor_of(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Rational power(const Rational& x, unsigned long n) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), n);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), n);
  r.canonicalize();
  return r;
}

namespace {

// Both endpoints nonnegative.
Rational simplest_nonneg(const Rational& lo, const Rational& hi) {
  Integer fl = floor_of(lo);
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  Rational inner = simplest_nonneg(1 / (hi - fl), 1 / (lo - fl));
  return Rational(fl) + 1 / inner;
}

}  // namespace

Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_nonneg(-hi, -lo);
  return simplest_nonneg(lo, hi);
}

Rational round_down(const Rational& x, unsigned long bits) {
  Integer scaled;
  Integer num = x.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), x.get_den_mpz_t());
  Rational r(scaled);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), bits);
  return r;
}

Rational round_up(const Rational& x, unsigned long bits) {
  Integer scaled;
  Integer num = x.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
  mpz_cdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), x.get_den_mpz_t());
  Rational r(scaled);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), bits);
  return r;
}

Rational power_of_two_above(const Rational& x) {
  Rational a = abs(x);
  Rational p = 1;
  while (p < a) p *= 2;
  return p;
}

long approx_log2(const Rational& x) {
  if (x == 0) return 0;
  long n = static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2));
  long d = static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 2));
  return n - d;
}

double to_double(const Rational& x) { return x.get_d(); }

}  // namespace pingcert
