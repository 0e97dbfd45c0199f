#pragma once

#include "pingcert/interval.hpp"
#include "pingcert/polynomial.hpp"

namespace pingcert {

// Bisection depth after which refinement gives up with Undecided.
inline constexpr unsigned long kMaxRefinementBits = 4096;

// A real algebraic number: a root of a squarefree polynomial together with an
// isolating interval. Either exact (lo == hi is the root) or the root lies in
// the open interval (lo, hi), is the only root there, and p(lo), p(hi) have
// opposite nonzero signs.
class AlgebraicReal {
 public:
  // Largest real root of p. Throws InvalidInput when p has no real root.
  static AlgebraicReal largest_root(const Polynomial& p);
  static AlgebraicReal rational(const Rational& value);

  const Polynomial& polynomial() const { return poly_; }
  bool is_exact() const { return lo_ == hi_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  RationalInterval interval() const { return {lo_, hi_}; }

  // Shrinks the isolating interval to width <= width (exact roots are found
  // along the way when rational). Throws Undecided past kMaxRefinementBits.
  void refine(const Rational& width);
  // One bisection step.
  void bisect();

 private:
  AlgebraicReal(Polynomial p, Rational lo, Rational hi);
  void try_exact();

  Polynomial poly_;
  Rational lo_, hi_;
  int sign_hi_ = 0;
  unsigned long steps_ = 0;
};

// Exact three-way comparison (refines both arguments as needed).
int compare(AlgebraicReal& a, AlgebraicReal& b);

}  // namespace pingcert
