#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pingcert/rational.hpp"

namespace pingcert {

// Dense univariate polynomial over Q, coefficients in ascending degree.
// Always normalized: no trailing zero coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);
  static Polynomial constant(const Rational& c);
  static Polynomial monomial(const Rational& c, std::size_t degree);
  // (x - r)
  static Polynomial linear_factor(const Rational& root);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(std::size_t k) const;
  const Rational& leading() const;

  Rational operator()(const Rational& x) const;
  int sign_at(const Rational& x) const;

  Polynomial derivative() const;
  Polynomial monic() const;
  // Integer coefficients with content 1 and positive leading coefficient.
  Polynomial primitive() const;
  // p(-x)
  Polynomial reflected() const;
  Polynomial squarefree_part() const;
  // Yun: returns (f_k, k) with p = lc * prod f_k^k, each f_k monic squarefree, pairwise coprime.
  std::vector<std::pair<Polynomial, int>> squarefree_factorization() const;

  std::string to_string() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& p);
  friend Polynomial operator-(const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

// Euclidean division; throws InvalidInput on division by zero.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
// Monic gcd (zero when both are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);
bool divides(const Polynomial& d, const Polynomial& p);

// Sturm chain of a squarefree polynomial. count(a, b) is the number of
// distinct real roots in the half-open interval (a, b].
class SturmSequence {
 public:
  explicit SturmSequence(const Polynomial& squarefree);
  int variations_at(const Rational& x) const;
  int variations_at_infinity(bool positive) const;
  int count(const Rational& a, const Rational& b) const;
  int count_above(const Rational& a) const;
  int total() const;
  const Polynomial& polynomial() const { return chain_.front(); }

 private:
  std::vector<Polynomial> chain_;
};

// Every real root of p has absolute value < the returned power of two.
Rational root_bound(const Polynomial& p);

// Real roots of p strictly greater than x, counted with multiplicity.
int count_roots_above(const Polynomial& p, const Rational& x);
// Real roots of p greater than or equal to x, counted with multiplicity.
int count_roots_at_least(const Polynomial& p, const Rational& x);

// Newton identities. power_sums returns s_1..s_count for the roots of p (p nonzero).
std::vector<Rational> power_sums(const Polynomial& p, std::size_t count);
// Monic polynomial of the given degree whose roots have power sums s_1..s_degree.
Polynomial from_power_sums(std::span<const Rational> sums, std::size_t degree);

// Characteristic polynomial of the i-th exterior power, from the
// characteristic polynomial alone (roots: products over i-subsets).
Polynomial wedge_polynomial(const Polynomial& charpoly, std::size_t i);
// Roots (z_j z_k)^2 for j <= k: the Graeffe transform of the symmetric square.
// Its largest real root is the fourth power of the largest root modulus.
Polynomial squared_products_polynomial(const Polynomial& charpoly);

// n-th cyclotomic polynomial.
Polynomial cyclotomic(unsigned n);
unsigned euler_phi(unsigned n);

}  // namespace pingcert
