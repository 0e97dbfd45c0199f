#include "pingcert/projective.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "pingcert/errors.hpp"
#include "pingcert/spectral.hpp"

namespace pingcert {

ProjPoint::ProjPoint(Vector representative) {
  Integer l = 1, g = 0;
  for (auto& c : representative) {
    c.canonicalize();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  for (const auto& c : representative) {
    Integer x = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  }
  if (g == 0) throw InvalidInput("projective point from the zero vector");
  auto first = std::find_if(representative.begin(), representative.end(), [](const Rational& c) { return c != 0; });
  if (sgn(*first) < 0) g = -g;
  v_.reserve(representative.size());
  for (const auto& c : representative) v_.emplace_back(Integer(c.get_num() * (l / c.get_den()) / g));
}

ProjPoint image(const Matrix& m, const ProjPoint& p) { return ProjPoint(m.apply(p.vec())); }

Rational proj_distance_sq(const ProjPoint& p, const ProjPoint& q) {
  if (p.dim() != q.dim()) throw InvalidInput("projective dimension mismatch");
  Rational pp = norm_sq(p.vec()), qq = norm_sq(q.vec()), pq = dot(p.vec(), q.vec());
  return (pp * qq - pq * pq) / (pp * qq);
}

Rational point_hyperplane_distance_sq(const ProjPoint& p, const ProjHyperplane& h) {
  if (p.dim() != h.dim()) throw InvalidInput("projective dimension mismatch");
  Rational pn = dot(p.vec(), h.vec());
  return pn * pn / (norm_sq(p.vec()) * norm_sq(h.vec()));
}

namespace {

Rational pow2(long e) {
  Rational x = 1;
  if (e >= 0) mpq_mul_2exp(x.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else mpq_div_2exp(x.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return x;
}

// Multiplicity of the largest real root of p.
int top_root_multiplicity(const Polynomial& p) {
  auto factors = p.squarefree_factorization();
  int best_k = 0;
  std::optional<AlgebraicReal> best;
  for (auto& [f, k] : factors) {
    if (SturmSequence(f).total() == 0) continue;
    AlgebraicReal r = AlgebraicReal::largest_root(f);
    if (!best || compare(r, *best) > 0) {
      best = r;
      best_k = k;
    }
  }
  return best_k;
}

using Mpf = mpf_class;

// Top eigenvector of the symmetric positive definite G by inverse iteration
// with a shift just above the top eigenvalue.
std::vector<Mpf> top_eigenvector(const Matrix& g, const Rational& shift, unsigned long bits) {
  std::size_t n = g.dim();
  Eigen::MatrixXd ge(n, n);
  Rational scale = 0;
  for (auto e : g.entries()) scale = std::max(scale, Rational(abs(e)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ge(i, j) = to_double(g(i, j) / scale);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ge);
  Eigen::VectorXd guess = es.eigenvectors().col(n - 1);
  std::vector<Mpf> x(n, Mpf(0, bits));
  for (std::size_t i = 0; i < n; ++i) x[i] = Mpf(guess(i), bits);
  // Mix in a little of every coordinate so the start is never orthogonal to the target.
  for (std::size_t i = 0; i < n; ++i) x[i] += Mpf(1e-3 / static_cast<double>(i + 1), bits);

  std::vector<Mpf> a(n * n, Mpf(0, bits));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = Mpf(g(i, j), bits);
      if (i == j) a[i * n + j] -= Mpf(shift, bits);
    }
  // LU with partial pivoting, reused across iterations.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (abs(a[r * n + c]) > abs(a[p * n + c])) p = r;
    if (a[p * n + c] == 0) throw Undecided("singular shifted Gram matrix");
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[p * n + k], a[c * n + k]);
      std::swap(perm[p], perm[c]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      a[r * n + c] /= a[c * n + c];
      for (std::size_t k = c + 1; k < n; ++k) a[r * n + k] -= a[r * n + c] * a[c * n + k];
    }
  }
  auto normalize = [&](std::vector<Mpf>& v) {
    Mpf m(0, bits);
    for (auto& c : v)
      if (abs(c) > m) m = abs(c);
    for (auto& c : v) c /= m;
  };
  normalize(x);
  for (int it = 0; it < 6; ++it) {
    std::vector<Mpf> y(n, Mpf(0, bits));
    for (std::size_t i = 0; i < n; ++i) y[i] = x[perm[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < i; ++k) y[i] -= a[i * n + k] * y[k];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t k = i + 1; k < n; ++k) y[i] -= a[i * n + k] * y[k];
      y[i] /= a[i * n + i];
    }
    normalize(y);
    x = std::move(y);
  }
  return x;
}

// Rational representative: a snapped simple vector if it is an exact
// eigenvector, otherwise dyadic rounding.
Vector rationalize(const Matrix& g, const std::vector<Mpf>& x, unsigned long bits) {
  std::size_t n = x.size();
  Rational tol = pow2(-static_cast<long>(bits / 4));
  Vector snapped(n), rounded(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational c(x[i]);
    snapped[i] = simplest_between(c - tol, c + tol);
    rounded[i] = round_down(c, bits);
  }
  Vector gs = g.apply(snapped);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (abs(snapped[i]) > abs(snapped[k])) k = i;
  if (snapped[k] != 0) {
    Rational rho = gs[k] / snapped[k];
    bool exact = true;
    for (std::size_t i = 0; i < n && exact; ++i) exact = gs[i] == rho * snapped[i];
    if (exact) return snapped;
  }
  return rounded;
}

// Davis-Kahan residual bound: sin^2 of the angle between x and the top
// eigenvector of g, given every other eigenvalue is <= second_hi. nullopt
// when the Rayleigh quotient does not clear second_hi.
std::optional<Rational> sin_sq_bound(const Matrix& g, const Vector& x, const Rational& second_hi) {
  Vector gx = g.apply(x);
  Rational xx = norm_sq(x);
  Rational rho = dot(x, gx) / xx;
  if (rho <= second_hi) return std::nullopt;
  Rational rr = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rational r = gx[i] - rho * x[i];
    rr += r * r;
  }
  Rational gap = rho - second_hi;
  return rr / (xx * gap * gap);
}

Rational sqrt_upper(const Rational& x, unsigned long bits) {
  if (x == 0) return 0;
  return sqrt_interval(x, bits).hi;
}

}  // namespace

Frames svd_frames(const Matrix& m, const FrameOptions& opts) {
  if (m.dim() < 2) throw InvalidInput("projective frames need dimension at least 2");
  unsigned long bits = std::max(64UL, opts.precision_bits);
  Matrix g = m.transpose() * m;
  Matrix gl = m * m.transpose();
  GramSpectrum spec = gram_spectrum(m);
  if (top_root_multiplicity(spec.gram_poly) >= 2) throw Undecided("no singular gap: a_1 = a_2");

  Rational w = pow2(-static_cast<long>(bits)) * std::max(Rational(1), Rational(spec.mu1.hi()));
  spec.mu1.refine(w);
  RationalInterval second = second_gram_eigenvalue(spec, w);
  for (unsigned long k = 0; second.hi >= spec.mu1.lo(); ++k) {
    if (k > kMaxRefinementBits) throw Undecided("singular gap not resolved at the precision cap");
    w /= 4;
    spec.mu1.refine(w);
    second = second_gram_eigenvalue(spec, w);
  }
  Rational shift = spec.mu1.hi() + w;
  Vector x = rationalize(g, top_eigenvector(g, shift, bits + 32), bits);
  Vector y = rationalize(gl, top_eigenvector(gl, shift, bits + 32), bits);

  auto dx = sin_sq_bound(g, x, second.hi);
  auto dy = sin_sq_bound(gl, y, second.hi);
  if (!dx || !dy) throw Undecided("approximate singular frame too coarse for the gap");
  Rational err = std::max(sqrt_upper(*dx, bits + 32), sqrt_upper(*dy, bits + 32));

  Frames f;
  f.v = ProjPoint(y);
  f.H = ProjPoint(x);
  f.frame_error = err;
  f.gram_top_lo = spec.mu1.lo();
  f.gram_second_hi = second.hi;
  RationalInterval ratio_sq = second / spec.mu1.interval();
  f.sv_ratio = sqrt_interval(ratio_sq, bits);
  if (f.sv_ratio.hi > 1) f.sv_ratio.hi = 1;
  return f;
}

namespace {

std::optional<std::string> contraction_failure(const ContractionWitness& w, bool proximal) {
  Rational margin = w.epsilon - 2 * w.frame_error;
  if (margin <= 0) return "epsilon - 2*frame_error <= 0";
  // a_2/a_1 <= (eps - 2 delta)^2, squared and cleared of denominators.
  Rational m2 = margin * margin;
  if (w.gram_second_hi > m2 * m2 * w.gram_top_lo) return "sv_ratio <= (epsilon - 2*frame_error)^2";
  if (proximal) {
    if (w.r <= 2 * w.epsilon) return "r > 2*epsilon";
    Rational need = w.r + 2 * w.frame_error;
    if (point_hyperplane_distance_sq(w.v, w.H) < need * need) return "d(v,H)^2 >= (r + 2*frame_error)^2";
  }
  return std::nullopt;
}

ContractionWitness make_witness(const Frames& f, const Rational& epsilon, const Rational& r) {
  return {epsilon, r, f.v, f.H, f.frame_error, f.sv_ratio, f.gram_top_lo, f.gram_second_hi};
}

}  // namespace

ContractionOutcome contraction_certify(const Matrix& m, const Rational& epsilon, const Rational& r,
                                       ContractionMode mode, const FrameOptions& opts) {
  if (epsilon <= 0) throw InvalidInput("epsilon must be positive");
  bool proximal = mode != ContractionMode::contracting;
  if (proximal && r <= 2 * epsilon) throw InvalidInput("proximality needs r > 2*epsilon");
  Rational rr = proximal ? r : Rational(0);
  ContractionOutcome out;
  auto one = [&](const Matrix& g, const char* which, ContractionWitness& slot) -> bool {
    Frames f;
    try {
      f = svd_frames(g, opts);
    } catch (const Undecided& e) {
      std::string what = e.what();
      if (what.rfind("no singular gap", 0) == 0) {
        out.reason = std::string(which) + ": sv_ratio = 1 (no singular gap)";
        return false;
      }
      throw;
    }
    slot = make_witness(f, epsilon, rr);
    if (auto fail = contraction_failure(slot, proximal)) {
      out.reason = std::string(which) + ": " + *fail;
      return false;
    }
    return true;
  };
  if (!one(m, "g", out.forward)) return out;
  if (mode == ContractionMode::very_proximal) {
    out.backward.emplace();
    if (!one(m.inverse(), "g^-1", *out.backward)) return out;
  }
  out.certified = true;
  return out;
}

std::optional<std::string> check_contraction_witness(const Matrix& m, const ContractionWitness& w, bool proximal) {
  if (m.dim() != w.v.dim() || m.dim() != w.H.dim()) return "witness dimension mismatch";
  if (w.epsilon <= 0) return "epsilon > 0";
  if (w.frame_error < 0) return "frame_error >= 0";
  Matrix g = m.transpose() * m;
  Polynomial gp = char_poly(g);
  if (count_roots_at_least(gp, w.gram_top_lo) < 1) return "gram_top_lo <= a_1^2";
  if (count_roots_above(gp, w.gram_second_hi) > 1) return "gram_second_hi >= a_2^2";
  if (w.sv_ratio.lo < 0 || w.sv_ratio.lo > w.sv_ratio.hi) return "sv_ratio is an interval";
  if (w.sv_ratio.hi * w.sv_ratio.hi * w.gram_top_lo < w.gram_second_hi) return "sv_ratio.hi >= a_2/a_1";
  Rational d2 = w.frame_error * w.frame_error;
  auto dh = sin_sq_bound(g, w.H.vec(), w.gram_second_hi);
  if (!dh || *dh > d2) return "frame_error bounds the repelling hyperplane error";
  auto dv = sin_sq_bound(m * m.transpose(), w.v.vec(), w.gram_second_hi);
  if (!dv || *dv > d2) return "frame_error bounds the attracting point error";
  Rational margin = w.epsilon - 2 * w.frame_error;
  if (margin > 0 && w.sv_ratio.hi > margin * margin) return "sv_ratio <= (epsilon - 2*frame_error)^2";
  return contraction_failure(w, proximal);
}

RationalInterval lipschitz_bounds(const Matrix& m, std::optional<Rational> r, const Rational& tolerance) {
  if (r) return local_lipschitz(m, *r, tolerance);
  return global_lipschitz(m, tolerance);
}

LipschitzWitness lipschitz_witness(const Matrix& m, const Rational& tolerance) {
  GramSpectrum g = gram_spectrum(m);
  LipschitzWitness w;
  if (!g.mu12) throw InvalidInput("Lipschitz constant needs dimension at least 2");
  Rational t = tolerance / 4;
  for (;;) {
    g.mu12->refine(t);
    g.inv_mu.refine(t);
    w.x_hi = g.mu12->hi();
    w.y_hi = g.inv_mu.hi();
    RationalInterval s = sqrt_interval(w.x_hi, bits_for(t) + 8);
    w.lip_hi = s.hi * w.y_hi;
    RationalInterval lo = sqrt_interval(g.mu12->lo(), bits_for(t) + 8) * RationalInterval(g.inv_mu.lo());
    if (w.lip_hi - lo.lo <= tolerance) return w;
    t /= 4;
  }
}

std::optional<std::string> check_lipschitz_witness(const Matrix& m, const LipschitzWitness& w) {
  if (m.dim() < 2) return "dimension at least 2";
  Polynomial gp = char_poly(m.transpose() * m);
  if (count_roots_above(wedge_polynomial(gp, 2), w.x_hi) > 0) return "x_hi >= (a_1 a_2)^2";
  Matrix mi = m.inverse();
  if (count_roots_above(char_poly(mi.transpose() * mi), w.y_hi) > 0) return "y_hi >= 1/a_d^2";
  if (w.lip_hi < 0 || w.lip_hi * w.lip_hi < w.x_hi * w.y_hi * w.y_hi) return "lip_hi^2 >= x_hi * y_hi^2";
  return std::nullopt;
}

}  // namespace pingcert
