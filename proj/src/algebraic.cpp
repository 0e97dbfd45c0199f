#include "pingcert/algebraic.hpp"

#include "pingcert/errors.hpp"

namespace pingcert {

AlgebraicReal::AlgebraicReal(Polynomial p, Rational lo, Rational hi)
  : poly_(p.primitive()), lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ != hi_) sign_hi_ = poly_.sign_at(hi_);
}

AlgebraicReal AlgebraicReal::rational(const Rational& value) {
  return AlgebraicReal(Polynomial::linear_factor(value), value, value);
}

AlgebraicReal AlgebraicReal::largest_root(const Polynomial& p) {
  Polynomial f = p.squarefree_part();
  if (f.degree() < 1) throw InvalidInput("polynomial has no real root");
  if (f.degree() == 1) return rational(-f.coefficient(0) / f.coefficient(1));
  SturmSequence sturm(f);
  Rational bound = root_bound(f);
  Rational lo = -bound, hi = bound;
  if (sturm.count(lo, hi) == 0) throw InvalidInput("polynomial has no real root");
  // Invariant: the largest root lies in (lo, hi] and there is none above hi.
  while (sturm.count(lo, hi) > 1) {
    Rational mid = (lo + hi) / 2;
    if (sturm.count(mid, hi) >= 1) lo = mid;
    else hi = mid;
  }
  if (f(hi) == 0) return AlgebraicReal(f, hi, hi);
  // Move lo off any lower root so that the sign-change invariant holds.
  while (f(lo) == 0) {
    Rational mid = (lo + hi) / 2;
    if (f(mid) == 0) return AlgebraicReal(f, mid, mid);
    if (sturm.count(mid, hi) >= 1) lo = mid;
    else hi = mid;
  }
  AlgebraicReal r(f, lo, hi);
  for (int k = 0; k < 12 && !r.is_exact(); ++k) {
    r.try_exact();
    r.bisect();
  }
  r.try_exact();
  return r;
}

void AlgebraicReal::try_exact() {
  if (is_exact()) return;
  // Simplest rational well inside the open interval.
  Rational pad = (hi_ - lo_) / 1048576;
  Rational q = simplest_between(lo_ + pad, hi_ - pad);
  if (poly_(q) == 0) lo_ = hi_ = q;
}

void AlgebraicReal::bisect() {
  if (is_exact()) return;
  if (++steps_ > kMaxRefinementBits) throw Undecided("root refinement exceeded the precision cap");
  Rational mid = (lo_ + hi_) / 2;
  int s = poly_.sign_at(mid);
  if (s == 0) {
    lo_ = hi_ = mid;
    return;
  }
  if (s == sign_hi_) hi_ = mid;
  else lo_ = mid;
}

void AlgebraicReal::refine(const Rational& width) {
  if (width <= 0) throw InvalidInput("refinement width must be positive");
  unsigned since_check = 0;
  while (!is_exact() && hi_ - lo_ > width) {
    bisect();
    if (++since_check == 8) {
      try_exact();
      since_check = 0;
    }
  }
  try_exact();
}

namespace {

// -1 / +1 when the enclosures are disjoint, 0 when they still overlap.
int separated(const AlgebraicReal& a, const AlgebraicReal& b) {
  bool both_exact = a.is_exact() && b.is_exact();
  if (a.hi() < b.lo() || (a.hi() == b.lo() && !both_exact)) return -1;
  if (b.hi() < a.lo() || (b.hi() == a.lo() && !both_exact)) return 1;
  return 0;
}

}  // namespace

int compare(AlgebraicReal& a, AlgebraicReal& b) {
  if (a.is_exact() && b.is_exact()) return cmp(a.lo(), b.lo());
  if (int s = separated(a, b)) return s;
  // The enclosures overlap: decide equality once, exactly.
  bool equal;
  if (a.is_exact()) equal = b.polynomial()(a.lo()) == 0;
  else if (b.is_exact()) equal = a.polynomial()(b.lo()) == 0;
  else {
    Rational lo = a.lo() > b.lo() ? a.lo() : b.lo();
    Rational hi = a.hi() < b.hi() ? a.hi() : b.hi();
    Polynomial g = gcd(a.polynomial(), b.polynomial());
    equal = false;
    if (g.degree() >= 1) {
      int inside = SturmSequence(g).count(lo, hi) - (g(hi) == 0 ? 1 : 0);
      equal = inside >= 1;
    }
  }
  if (equal) return 0;
  for (;;) {
    if (int s = separated(a, b)) return s;
    if (a.hi() - a.lo() >= b.hi() - b.lo()) a.bisect();
    else b.bisect();
  }
}

}  // namespace pingcert
