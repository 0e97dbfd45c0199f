#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pingcert/errors.hpp"
#include "pingcert/projective.hpp"
#include "pingcert/spectral.hpp"

using namespace pingcert;

namespace {

Matrix M(std::vector<std::vector<long>> rows) {
  std::vector<std::vector<Rational>> r;
  for (auto& row : rows) {
    r.emplace_back();
    for (long x : row) r.back().emplace_back(x);
  }
  return Matrix::from_rows(r);
}

ProjPoint P(std::vector<long> v) {
  Vector x;
  for (long c : v) x.emplace_back(c);
  return ProjPoint(x);
}

// 200-bit numeric frames: repeated squaring of the Gram matrix, then one
// application to a generic vector.
std::vector<mpf_class> numeric_top(const Matrix& g) {
  std::size_t n = g.dim();
  std::vector<mpf_class> a(n * n, mpf_class(0, 200));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = mpf_class(g(i, j), 200);
  for (int it = 0; it < 40; ++it) {
    std::vector<mpf_class> b(n * n, mpf_class(0, 200));
    mpf_class mx(0, 200);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) b[i * n + j] += a[i * n + k] * a[k * n + j];
        if (abs(b[i * n + j]) > mx) mx = abs(b[i * n + j]);
      }
    for (auto& c : b) c /= mx;
    a = b;
  }
  std::vector<mpf_class> x(n, mpf_class(0, 200));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x[i] += a[i * n + j] * mpf_class(1.0 + 0.37 * static_cast<double>(j), 200);
  return x;
}

double chordal(const Vector& a, const std::vector<mpf_class>& b) {
  // |a ^ b|^2 summed over coordinate planes, avoiding cancellation.
  std::size_t n = a.size();
  mpf_class aa(0, 200), bb(0, 200), w(0, 200);
  for (std::size_t i = 0; i < n; ++i) {
    mpf_class ai(a[i], 200);
    aa += ai * ai;
    bb += b[i] * b[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      mpf_class t = ai * b[j] - mpf_class(a[j], 200) * b[i];
      w += t * t;
    }
  }
  return mpf_class(sqrt(w / (aa * bb)), 200).get_d();
}

}  // namespace

TEST(Projective, Distances) {
  EXPECT_EQ(proj_distance_sq(P({1, 0}), P({0, 1})), 1);
  EXPECT_EQ(proj_distance_sq(P({3, 4}), P({-6, -8})), 0);
  EXPECT_EQ(proj_distance_sq(P({1, 1}), P({1, 0})), Rational(1, 2));
  EXPECT_EQ(point_hyperplane_distance_sq(P({1, 0}), P({1, 0})), 1);
  EXPECT_EQ(point_hyperplane_distance_sq(P({0, 1}), P({1, 0})), 0);
  EXPECT_EQ(point_hyperplane_distance_sq(P({1, 1}), P({0, 1})), Rational(1, 2));
  EXPECT_THROW(P({0, 0}), InvalidInput);
  EXPECT_EQ(P({-2, 4}).vec(), (Vector{Rational(1), Rational(-2)}));
}

TEST(Projective, TriangleInequalitySampled) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> c(-20, 20);
  for (int t = 0; t < 10000; ++t) {
    auto rnd = [&] {
      for (;;) {
        Vector v{Rational(c(rng)), Rational(c(rng)), Rational(c(rng))};
        if (v[0] != 0 || v[1] != 0 || v[2] != 0) return ProjPoint(v);
      }
    };
    ProjPoint x = rnd(), y = rnd(), z = rnd();
    double a = std::sqrt(to_double(proj_distance_sq(x, y)));
    double b = std::sqrt(to_double(proj_distance_sq(y, z)));
    double cc = std::sqrt(to_double(proj_distance_sq(x, z)));
    EXPECT_LE(cc, a + b + 1e-12);
    EXPECT_EQ(proj_distance_sq(x, y), proj_distance_sq(y, x));
  }
}

TEST(Projective, DiagonalFramesExact) {
  Frames f = svd_frames(Matrix::diagonal({Rational(10), Rational(1, 10)}));
  EXPECT_EQ(f.v, P({1, 0}));
  EXPECT_EQ(f.H, P({1, 0}));  // normal e1: repelling hyperplane span{e2}
  EXPECT_EQ(f.frame_error, 0);
  EXPECT_EQ(f.sv_ratio, RationalInterval(Rational(1, 100)));
}

TEST(Projective, NoGap) {
  EXPECT_THROW(svd_frames(M({{0, -1}, {1, 0}})), Undecided);
  EXPECT_THROW(svd_frames(Matrix::identity(3)), Undecided);
}

TEST(Projective, FramesAgainstNumericOracle) {
  Matrix m = M({{5, 2}, {2, 1}});
  Frames f = svd_frames(m);
  EXPECT_LE(chordal(f.H.vec(), numeric_top(m.transpose() * m)), 1e-6);
  EXPECT_LE(chordal(f.v.vec(), numeric_top(m * m.transpose())), 1e-6);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> c(-6, 6);
  for (int t = 0; t < 20; ++t) {
    std::size_t d = 2 + t % 3;
    std::vector<Rational> e;
    for (std::size_t k = 0; k < d * d; ++k) e.emplace_back(c(rng));
    Matrix g = Matrix::identity(d);
    try {
      g = Matrix(d, e);
    } catch (const InvalidInput&) {
      continue;
    }
    Frames fr;
    try {
      fr = svd_frames(g);
    } catch (const Undecided&) {
      continue;
    }
    double err = to_double(fr.frame_error) + 1e-40;
    EXPECT_LE(chordal(fr.H.vec(), numeric_top(g.transpose() * g)), err + 1e-50);
    EXPECT_LE(chordal(fr.v.vec(), numeric_top(g * g.transpose())), err + 1e-50);
    EXPECT_LT(to_double(fr.frame_error), 1e-50);
  }
}

TEST(Projective, ContractionExamples) {
  Matrix d = Matrix::diagonal({Rational(10), Rational(1, 10)});
  auto c = contraction_certify(d, Rational(1, 10), 0, ContractionMode::contracting);
  ASSERT_TRUE(c.certified) << c.reason;
  EXPECT_EQ(c.forward.sv_ratio, RationalInterval(Rational(1, 100)));
  EXPECT_FALSE(check_contraction_witness(d, c.forward, false));

  auto id = contraction_certify(Matrix::identity(2), Rational(1, 2), 0, ContractionMode::contracting);
  EXPECT_FALSE(id.certified);

  auto vp = contraction_certify(d, Rational(1, 10), Rational(1, 2), ContractionMode::very_proximal);
  ASSERT_TRUE(vp.certified) << vp.reason;
  EXPECT_EQ(vp.forward.v, P({1, 0}));
  EXPECT_EQ(vp.forward.H, P({1, 0}));
  EXPECT_EQ(vp.backward->v, P({0, 1}));
  EXPECT_EQ(vp.backward->H, P({0, 1}));
  EXPECT_EQ(point_hyperplane_distance_sq(vp.forward.v, vp.forward.H), 1);
  EXPECT_THROW(contraction_certify(d, Rational(1, 10), Rational(1, 10), ContractionMode::proximal), InvalidInput);
}

TEST(Projective, TamperedWitnessRejected) {
  Matrix m = M({{5, 2}, {2, 1}}).pow(4);
  auto c = contraction_certify(m, Rational(1, 10), Rational(1, 2), ContractionMode::proximal);
  ASSERT_TRUE(c.certified) << c.reason;
  EXPECT_FALSE(check_contraction_witness(m, c.forward, true));
  auto bad = c.forward;
  bad.gram_second_hi /= 1000;
  EXPECT_TRUE(check_contraction_witness(m, bad, true));
  bad = c.forward;
  bad.gram_top_lo *= 2;
  EXPECT_TRUE(check_contraction_witness(m, bad, true));
  bad = c.forward;
  bad.v = P({1, 0});
  EXPECT_TRUE(check_contraction_witness(m, bad, true));
}

TEST(Projective, LipschitzWitness) {
  Matrix d = Matrix::diagonal({Rational(10), Rational(1, 10)});
  auto w = lipschitz_witness(d, Rational(1, 1000000));
  EXPECT_EQ(w.lip_hi, 100);
  EXPECT_FALSE(check_lipschitz_witness(d, w));
  auto bad = w;
  bad.x_hi = Rational(1, 2);
  EXPECT_TRUE(check_lipschitz_witness(d, bad));
  EXPECT_EQ(lipschitz_bounds(Matrix::identity(2), std::nullopt, Rational(1, 1000)), RationalInterval(Rational(1)));
}
