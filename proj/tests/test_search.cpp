#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "pingcert/errors.hpp"
#include "pingcert/search.hpp"
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

const Matrix kA = M({{1, 2}, {0, 1}});
const Matrix kB = M({{1, 0}, {2, 1}});

GeneratorSetPtr sanov() {
  return make_generator_set({Matrix::identity(2), kA, kA.inverse(), kB, kB.inverse()});
}

GeneratorSetPtr symmetric_set(const std::vector<Matrix>& gens) {
  std::vector<Matrix> all{Matrix::identity(gens.front().dim())};
  for (const auto& g : gens) {
    all.push_back(g);
    all.push_back(g.inverse());
  }
  return make_generator_set(all);
}

double op_norm(const Matrix& m) {
  Eigen::MatrixXd e(m.dim(), m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) e(i, j) = to_double(m(i, j));
  return Eigen::JacobiSVD<Eigen::MatrixXd>(e).singularValues()(0);
}

}  // namespace

TEST(Escape, SanovSemisimple) {
  auto e = escape_search(sanov(), EscapePredicate::semisimple_infinite_order(), 6);
  EXPECT_EQ(e.k, 2);
  EXPECT_EQ(e.word.matrix(), kA * kB);
  EXPECT_EQ(e.word.matrix().trace(), 6);
  // x^2 - 6x + 1: eigenvalues 3 +- 2 sqrt 2
  EXPECT_EQ(char_poly(e.word.matrix()), Polynomial({Rational(1), Rational(-6), Rational(1)}));
}

TEST(Escape, TrivialCases) {
  auto s = sanov();
  EXPECT_EQ(escape_search(s, EscapePredicate::nonidentity(), 3).k, 1);
  EXPECT_THROW(escape_search(make_generator_set({Matrix::identity(2)}), EscapePredicate::nonidentity(), 5),
               NotFound);
  EXPECT_THROW(escape_search(s, EscapePredicate::nonidentity(), 0), InvalidInput);
  auto u = symmetric_set({M({{1, 1}, {0, 1}})});
  EXPECT_THROW(escape_search(u, EscapePredicate::semisimple_infinite_order(), 6), NotFound);
}

TEST(Escape, MovesPointAndHyperplane) {
  auto s = sanov();
  ProjPoint e1(Vector{1, 0}), e2(Vector{0, 1});
  // a fixes e1, a^-1 too; b moves it.
  auto m = escape_search(s, EscapePredicate::moves_point(e1), 3);
  EXPECT_EQ(m.word.matrix(), kB);
  // Off the hyperplane with normal e2 (the x-axis): b e1 = (1,2).
  auto h = escape_search(s, EscapePredicate::moves_point_off_hyperplane(e1, e2, 2, Rational(1, 2)), 3);
  EXPECT_EQ(h.word.matrix(), kB);
  EXPECT_EQ(h.j, 1);
}

TEST(Conjugation, UnshearsDiagonal) {
  Matrix h0 = M({{1, 100}, {0, 1}});
  Matrix d = Matrix::diagonal({Rational(2), Rational(1, 2)});
  GeneratorSet s({Matrix::identity(2), d.conjugated_by(h0)});
  auto r = conjugation_reduce(s);
  EXPECT_LE(r.achieved_norm.hi, 3);
  EXPECT_GE(r.initial_norm.lo, 100);
  EXPECT_LE(std::abs(op_norm(r.reduced[1]) - 2.0), 1e-6);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(char_poly(s[i]), char_poly(r.reduced[i]));
}

TEST(Conjugation, DiagonalUntouchedAndInvariant) {
  GeneratorSet s({Matrix::identity(2), Matrix::diagonal({Rational(3), Rational(1, 3)})});
  auto r = conjugation_reduce(s);
  EXPECT_TRUE(r.h.is_identity());
  EXPECT_EQ(r.achieved_norm, r.initial_norm);
  auto sv = sanov();
  auto c = conjugation_reduce(*sv);
  EXPECT_TRUE(c.h.is_identity());
  for (std::size_t i = 0; i < sv->size(); ++i)
    EXPECT_EQ(eigen_modulus_bounds((*sv)[i], Rational(1, 1 << 20)).lambda_max,
              eigen_modulus_bounds(c.reduced[i], Rational(1, 1 << 20)).lambda_max);
}

TEST(Conjugation, Integral) {
  Matrix a = M({{2, 1}, {1, 1}}), g0 = M({{1, 7}, {0, 1}});
  GeneratorSet s({Matrix::identity(2), a.conjugated_by(g0)});
  auto r = integral_conjugation_reduce(s);
  EXPECT_TRUE(r.gamma.is_integral());
  EXPECT_EQ(r.gamma.determinant(), 1);
  EXPECT_LE(op_norm(r.reduced[1]), 2 * op_norm(a));
  auto already = integral_conjugation_reduce(*sanov());
  EXPECT_TRUE(already.gamma.is_identity());
  GeneratorSet frac({Matrix::identity(2), Matrix::diagonal({Rational(2), Rational(1, 2)})});
  EXPECT_THROW(integral_conjugation_reduce(frac), InvalidInput);
}

TEST(QuasiDiagonalize, Examples) {
  auto q = quasi_diagonalize(M({{5, 2}, {2, 1}}));
  EXPECT_LT(q.defect, Rational(1, 1000000));
  // |a'_11 - (3 + 2 sqrt 2)| small, and lambda1 encloses 3 + 2 sqrt 2.
  EXPECT_NEAR(to_double(q.a_prime(0, 0)), 3 + 2 * std::sqrt(2.0), 1e-9);
  EXPECT_LE(q.lambda1.lo * q.lambda1.lo - 6 * q.lambda1.lo + 1, 0);
  EXPECT_GE(q.lambda1.hi * q.lambda1.hi - 6 * q.lambda1.hi + 1, 0);
  EXPECT_TRUE(q.norm_check);
  EXPECT_EQ(q.a_prime, M({{5, 2}, {2, 1}}).conjugated_by(q.h));

  auto diag = quasi_diagonalize(Matrix::diagonal({Rational(5), Rational(1, 5)}));
  EXPECT_TRUE(diag.h.is_identity());
  EXPECT_EQ(diag.defect, 0);
  EXPECT_THROW(quasi_diagonalize(M({{0, -1}, {1, 0}})), InvalidInput);
  // Negative dominant eigenvalue.
  auto neg = quasi_diagonalize(Matrix::diagonal({Rational(-4), Rational(-1, 4)}));
  EXPECT_EQ(neg.lambda1, RationalInterval(Rational(-4)));
}

TEST(WedgePower, Examples) {
  auto w = select_wedge_power(Matrix::diagonal({Rational(8), Rational(2), Rational(1, 16)}));
  EXPECT_EQ(w.i, 2u);
  EXPECT_TRUE(w.ratio.contains(Rational(32)));
  auto two = select_wedge_power(M({{2, 1}, {1, 1}}));
  EXPECT_EQ(two.i, 1u);
  EXPECT_THROW(select_wedge_power(Matrix::identity(2)), InvalidInput);
  // Symmetric spectrum: both ratios equal, the smaller index wins.
  auto tie = select_wedge_power(Matrix::diagonal({Rational(4), Rational(1), Rational(1, 4)}));
  EXPECT_EQ(tie.i, 1u);
}

namespace {

// Distance from [B u1] to span(u2) in the plane, computed in double.
double plane_distance(const Matrix& b, double u1x, double u1y, double u2x, double u2y) {
  double x = to_double(b(0, 0)) * u1x + to_double(b(0, 1)) * u1y;
  double y = to_double(b(1, 0)) * u1x + to_double(b(1, 1)) * u1y;
  double cross = x * u2y - y * u2x;
  return std::abs(cross) / (std::hypot(x, y) * std::hypot(u2x, u2y));
}

Matrix random_sl2(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3), step(-3, 3);
  Matrix m = Matrix::identity(2);
  for (int k = 0; k < 6; ++k) {
    long t = step(rng);
    Matrix e = pick(rng) % 2 ? M({{1, t}, {0, 1}}) : M({{1, 0}, {t, 1}});
    m = m * e;
  }
  return m;
}

}  // namespace

TEST(Separation, RationalBasisBelowDistance) {
  std::mt19937_64 rng(11);
  QuadraticBasis basis{1, {{{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}}};
  int members = 0, checked = 0;
  for (int t = 0; t < 100; ++t) {
    Matrix b = random_sl2(rng);
    auto s = separation_lower_bound(b, basis, Rational(1));
    EXPECT_EQ(s.degree, 1);
    if (s.member) {
      EXPECT_EQ(b(0, 0), 0);
      ++members;
      continue;
    }
    double d = plane_distance(b, 1, 0, 0, 1);
    ++checked;
    EXPECT_LE(to_double(s.bound), d);
    // 1 / (||B|| M^4) with M = 1
    EXPECT_EQ(s.bound, 1 / op_norm_upper(b, Rational(1, 1 << 20)));
  }
  EXPECT_EQ(members + checked, 100);
  auto m = separation_lower_bound(M({{0, -1}, {1, 0}}), basis, Rational(1));
  EXPECT_TRUE(m.member);
}

TEST(Separation, QuadraticEigenbasis) {
  std::mt19937_64 rng(12);
  // Eigenvectors of [[5,2],[2,1]]: (1 + sqrt 2, 1) and (1 - sqrt 2, 1).
  QuadraticBasis basis{2, {{{1, 1}, {1, 0}}, {{1, -1}, {1, 0}}}};
  double r2 = std::sqrt(2.0);
  for (int t = 0; t < 100; ++t) {
    Matrix b = random_sl2(rng);
    auto s = separation_lower_bound(b, basis, Rational(3));
    EXPECT_EQ(s.degree, 2);
    ASSERT_FALSE(s.member);
    EXPECT_LE(to_double(s.bound), plane_distance(b, 1 + r2, 1, 1 - r2, 1));
  }
  EXPECT_THROW(separation_lower_bound(Matrix::identity(2), basis, Rational(2)), InvalidInput);
  QuadraticBasis square{4, basis.vectors};
  EXPECT_THROW(separation_lower_bound(Matrix::identity(2), square, Rational(3)), InvalidInput);
  QuadraticBasis frac{2, {{{Rational(1, 3), 1}, {1, 0}}, {{1, -1}, {1, 0}}}};
  EXPECT_THROW(separation_lower_bound(Matrix::identity(2), frac, Rational(3)), InvalidInput);
}

TEST(Pipeline, SanovSemigroup) {
  auto s = sanov();
  auto out = find_semigroup_pair(s);
  ASSERT_TRUE(out.found()) << out.reason << "\n" << out.trace.str();
  EXPECT_LE(out.found_in_power, 12);
  EXPECT_FALSE(check_certificate(*out.certificate));
  EXPECT_TRUE(out.certificate->a.positive());
  EXPECT_TRUE(out.certificate->b_prime.positive());
  EXPECT_FALSE(relation_oracle(out.certificate->a.matrix(), out.certificate->b_prime.matrix(), 8, true));
}

TEST(Pipeline, SanovFree) {
  auto s = sanov();
  auto out = find_free_pair(s);
  ASSERT_TRUE(out.found()) << out.reason << "\n" << out.trace.str();
  EXPECT_LE(out.found_in_power, 20);
  EXPECT_FALSE(check_certificate(*out.certificate));
  EXPECT_FALSE(relation_oracle(out.certificate->a.matrix(), out.certificate->b.matrix(), 8, false));
}

TEST(Pipeline, Deterministic) {
  auto s = sanov();
  auto a = find_free_pair(s), b = find_free_pair(s);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.certificate->a, b.certificate->a);
  EXPECT_EQ(a.certificate->b, b.certificate->b);
}

TEST(Pipeline, NegativeControls) {
  SearchBudget small;
  small.max_power = 10;
  auto trivial = make_generator_set({Matrix::identity(2)});
  EXPECT_FALSE(find_semigroup_pair(trivial, small).found());
  EXPECT_FALSE(find_free_pair(trivial, small).found());
  auto unip = symmetric_set({M({{1, 1}, {0, 1}})});
  auto u = find_semigroup_pair(unip, small);
  EXPECT_FALSE(u.found());
  EXPECT_NE(u.reason.find("virtual nilpotency"), std::string::npos);
  auto cyc = symmetric_set({M({{2, 1}, {1, 1}})});
  EXPECT_FALSE(find_free_pair(cyc, small).found());
  EXPECT_FALSE(find_semigroup_pair(cyc, small).found());
}

TEST(Pipeline, ConjugatedSanov) {
  Matrix h = M({{31, 7}, {22, 5}});  // det 1, norm about 40
  std::vector<Matrix> g;
  auto base = sanov();
  for (const auto& x : base->matrices()) g.push_back(x.conjugated_by(h));
  auto s = make_generator_set(g);
  auto out = find_free_pair(s);
  ASSERT_TRUE(out.found()) << out.reason << "\n" << out.trace.str();
  EXPECT_EQ(out.found_in_power, find_free_pair(sanov()).found_in_power);
  EXPECT_FALSE(check_certificate(*out.certificate));
}
