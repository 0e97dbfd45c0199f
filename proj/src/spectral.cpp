#include "pingcert/spectral.hpp"

#include <numeric>

#include "pingcert/errors.hpp"

namespace pingcert {

unsigned long bits_for(const Rational& tolerance) {
  if (tolerance <= 0) throw InvalidInput("tolerance must be positive");
  long l = approx_log2(tolerance);
  return static_cast<unsigned long>(std::max(8L, 8 - l));
}

RationalInterval root_enclosure(AlgebraicReal& x, unsigned long k, const Rational& tolerance) {
  unsigned long bits = bits_for(tolerance);
  Rational w = tolerance;
  for (;;) {
    x.refine(w);
    if (x.lo() < 0) {
      // Only the positive part can hold the root of a nonnegative quantity.
      if (x.hi() <= 0) return RationalInterval(Rational(0));
      x.bisect();
      continue;
    }
    RationalInterval r = root_interval(x.interval(), k, bits);
    if (r.width() <= tolerance) return r;
    w /= 4;
    bits += 2;
  }
}

namespace {

// Largest eigenvalue modulus of a matrix with characteristic polynomial p.
RationalInterval top_modulus(const Polynomial& p, const Rational& tolerance) {
  AlgebraicReal x = AlgebraicReal::largest_root(squared_products_polynomial(p));
  return root_enclosure(x, 4, tolerance);
}

RationalInterval quotient_within(const std::vector<RationalInterval>& num, const std::vector<RationalInterval>& den) {
  RationalInterval a(Rational(1)), b(Rational(1));
  for (const auto& x : num) a = a * x;
  for (const auto& x : den) b = b * x;
  return a / b;
}

}  // namespace

std::vector<RationalInterval> modulus_products(const Matrix& m, const Rational& tolerance) {
  Polynomial chi = char_poly(m);
  std::size_t d = m.dim();
  std::vector<RationalInterval> p(d + 1);
  p[0] = RationalInterval(Rational(1));
  for (std::size_t k = 1; k <= d; ++k) {
    if (k == d) {
      p[k] = RationalInterval(abs(m.determinant()));
      continue;
    }
    p[k] = top_modulus(wedge_polynomial(chi, k), tolerance);
  }
  return p;
}

ModulusBounds eigen_modulus_bounds(const Matrix& m, const Rational& tolerance) {
  if (tolerance <= 0) throw InvalidInput("tolerance must be positive");
  Polynomial chi = char_poly(m);
  Rational w = tolerance / 2;
  for (;;) {
    RationalInterval top = top_modulus(chi, w);
    if (m.dim() == 1) return {top, RationalInterval(Rational(0))};
    RationalInterval pair =
        m.dim() == 2 ? RationalInterval(abs(m.determinant())) : top_modulus(wedge_polynomial(chi, 2), w);
    RationalInterval second = quotient_within({pair}, {top});
    if (second.width() <= tolerance) {
      // The second modulus never exceeds the first.
      if (second.hi > top.hi) second.hi = top.hi;
      if (second.lo > second.hi) second.lo = second.hi;
      return {top, second};
    }
    w /= 4;
  }
}

GramSpectrum gram_spectrum(const Matrix& m) {
  Matrix g = m.transpose() * m;
  Polynomial gp = char_poly(g);
  Matrix mi = m.inverse();
  Polynomial ip = char_poly(mi * mi.transpose());
  GramSpectrum out{gp, AlgebraicReal::largest_root(gp), std::nullopt, AlgebraicReal::largest_root(ip)};
  if (m.dim() >= 2) out.mu12 = AlgebraicReal::largest_root(wedge_polynomial(gp, 2));
  return out;
}

RationalInterval second_gram_eigenvalue(GramSpectrum& g, const Rational& tolerance) {
  if (!g.mu12) return RationalInterval(Rational(0));
  Rational w = tolerance;
  for (;;) {
    g.mu1.refine(w);
    g.mu12->refine(w);
    RationalInterval r = g.mu12->interval() / g.mu1.interval();
    if (r.hi > g.mu1.hi()) r.hi = g.mu1.hi();
    if (r.lo > r.hi) r.lo = r.hi;
    if (r.width() <= tolerance) return r;
    w /= 4;
  }
}

NormBounds operator_norm_bounds(const Matrix& m, const Rational& tolerance) {
  if (tolerance <= 0) throw InvalidInput("tolerance must be positive");
  GramSpectrum g = gram_spectrum(m);
  RationalInterval norm = root_enclosure(g.mu1, 2, tolerance);
  if (!g.mu12) return {norm, RationalInterval(Rational(0))};
  Rational w = tolerance / 2;
  for (;;) {
    RationalInterval a1sq(g.mu1.interval());
    RationalInterval prod = root_enclosure(*g.mu12, 2, w);
    RationalInterval ratio = prod / a1sq;
    if (ratio.hi > 1) ratio.hi = 1;
    if (ratio.lo > ratio.hi) ratio.lo = ratio.hi;
    if (ratio.width() <= tolerance) return {norm, ratio};
    w /= 4;
    g.mu1.refine(w);
  }
}

Rational op_norm_upper(const Matrix& m, const Rational& tolerance) {
  return operator_norm_bounds(m, tolerance).op_norm.hi;
}

SpectralData spectral_data(const Matrix& m, const Rational& tolerance) {
  ModulusBounds mb = eigen_modulus_bounds(m, tolerance);
  NormBounds nb = operator_norm_bounds(m, tolerance);
  return {char_poly(m), mb.lambda_max, mb.lambda_second, nb.op_norm, nb.sv_ratio};
}

RationalInterval global_lipschitz(const Matrix& m, const Rational& tolerance) {
  if (m.dim() == 1) return RationalInterval(Rational(0));
  GramSpectrum g = gram_spectrum(m);
  Rational w = tolerance / 4;
  for (;;) {
    g.inv_mu.refine(w);
    RationalInterval prod = root_enclosure(*g.mu12, 2, w);
    RationalInterval l = prod * g.inv_mu.interval();
    if (l.width() <= tolerance) return l;
    w /= 4;
  }
}

RationalInterval local_lipschitz(const Matrix& m, const Rational& r, const Rational& tolerance) {
  if (r <= 0 || r > 1) throw InvalidInput("r must lie in (0,1]");
  NormBounds nb = operator_norm_bounds(m, tolerance * r * r);
  RationalInterval rr(r * r);
  return nb.sv_ratio / rr;
}

ElementClass classify_element(const Matrix& m) {
  std::size_t d = m.dim();
  ElementClass out;
  Polynomial minpoly = minimal_polynomial(m);
  out.semisimple = gcd(minpoly, minpoly.derivative()).degree() == 0;
  if (!out.semisimple) return out;
  // phi(n) >= sqrt(n/2), so phi(n) <= d forces n <= 2 d^2.
  Polynomial rest = char_poly(m);
  unsigned long order = 1;
  for (unsigned n = 1; n <= 2 * d * d && rest.degree() > 0; ++n) {
    if (euler_phi(n) > d) continue;
    Polynomial phi = cyclotomic(n);
    bool used = false;
    while (rest.degree() >= phi.degree()) {
      auto [q, r] = divmod(rest, phi);
      if (!r.is_zero()) break;
      rest = q;
      used = true;
    }
    if (used) order = std::lcm(order, static_cast<unsigned long>(n));
  }
  if (rest.degree() == 0) {
    out.torsion = true;
    out.order = order;
  }
  return out;
}

}  // namespace pingcert
