#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "pingcert/errors.hpp"
#include "pingcert/growth.hpp"

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

GeneratorSet sanov() {
  Matrix a = M({{1, 2}, {0, 1}}), b = M({{1, 0}, {2, 1}});
  return GeneratorSet({Matrix::identity(2), a, a.inverse(), b, b.inverse()});
}

GeneratorSet heisenberg() {
  Matrix x = M({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}), y = M({{1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
  return GeneratorSet({Matrix::identity(3), x, x.inverse(), y, y.inverse()});
}

// Brute force: every word of length exactly n over Sigma, distinct values.
std::size_t word_oracle(const GeneratorSet& s, int n) {
  std::set<std::string> values;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Matrix m = Matrix::identity(s.dim());
    for (auto i : idx) m = m * s[i];
    values.insert(m.canonical());
    int k = n - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == s.size()) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return values.size();
}

}  // namespace

TEST(Growth, SanovFreeBall) {
  Ball b = ball_enumerate(sanov(), 8);
  for (int n = 0; n <= 8; ++n) EXPECT_EQ(b.sizes[n], static_cast<std::size_t>(2 * std::pow(3, n) - 1));
}

TEST(Growth, TrivialSet) {
  Ball b = ball_enumerate(GeneratorSet({Matrix::identity(2)}), 6);
  for (auto s : b.sizes) EXPECT_EQ(s, 1u);
}

TEST(Growth, HeisenbergMatchesWordOracle) {
  GeneratorSet h = heisenberg();
  Ball b = ball_enumerate(h, 6);
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(b.sizes[n], word_oracle(h, n)) << n;
}

TEST(Growth, SerialAndParallelAgree) {
  GeneratorSet h = heisenberg();
  Ball p = ball_enumerate(h, 7), s = ball_enumerate_serial(h, 7);
  EXPECT_EQ(p.sizes, s.sizes);
  EXPECT_EQ(p.elements, s.elements);
  Ball q = ball_enumerate(h, 7, {20'000'000, false});
  EXPECT_EQ(p.elements, q.elements);
}

TEST(Growth, NodeCap) {
  try {
    ball_enumerate(sanov(), 8, {100, true});
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.complete(), 3);
  }
}

TEST(Growth, SanovReport) {
  GrowthReport r = growth_report(sanov(), 6);
  EXPECT_EQ(r.cheeger_ratios[2], Rational(12, 17));
  for (int n = 1; n <= 6; ++n) {
    EXPECT_EQ(r.cheeger_ratios[n], Rational(4 * static_cast<long>(std::pow(3, n - 1)),
                                            2 * static_cast<long>(std::pow(3, n)) - 1));
    double oracle = std::log(2 * std::pow(3, n) - 1) / n;
    EXPECT_TRUE(r.entropy_estimates[n - 1].contains(Rational(oracle)) ||
                std::abs(to_double(r.entropy_estimates[n - 1].lo) - oracle) < 1e-12);
  }
  for (std::size_t n = 0; n < r.ball_sizes.size(); ++n)
    for (std::size_t m = 0; n + m < r.ball_sizes.size(); ++m)
      EXPECT_LE(r.ball_sizes[n + m], r.ball_sizes[n] * r.ball_sizes[m]);
}

TEST(Growth, CyclicUnipotentEntropyDecreases) {
  Matrix u = M({{1, 1}, {0, 1}});
  GrowthReport r = growth_report(GeneratorSet({Matrix::identity(2), u, u.inverse()}), 10);
  for (int n = 0; n <= 10; ++n) EXPECT_EQ(r.ball_sizes[n], static_cast<std::size_t>(2 * n + 1));
  for (std::size_t n = 1; n < r.entropy_estimates.size(); ++n)
    EXPECT_LT(r.entropy_estimates[n].hi, r.entropy_estimates[n - 1].lo);
}

TEST(Growth, EntropyNesting) {
  GrowthReport lo = growth_report(sanov(), 4, 20), hi = growth_report(sanov(), 4, 90);
  for (std::size_t n = 0; n < lo.entropy_estimates.size(); ++n)
    EXPECT_TRUE(lo.entropy_estimates[n].contains(hi.entropy_estimates[n]));
}

TEST(BoundChain, ClosedForms) {
  RationalInterval k = default_kappa_f2();
  EXPECT_NEAR(to_double(k.lo), std::sqrt(2 - std::sqrt(3.0)), 1e-15);
  BoundChain f = bound_chain(4, CertificateKind::free_group, k);
  EXPECT_NEAR(to_double(f.kappa_lower->lo), std::sqrt(2 - std::sqrt(3.0)) / (std::sqrt(2.0) * 4), 1e-12);
  EXPECT_GE(to_double(f.kappa_lower->lo), 0.0915);
  EXPECT_NEAR(to_double(f.h_lower->lo), (2 - std::sqrt(3.0)) / 128, 1e-12);
  EXPECT_LT(to_double(f.kappa_lower->width()), 1e-6);
  BoundChain s = bound_chain(3, CertificateKind::semigroup, k);
  EXPECT_FALSE(s.kappa_lower);
  EXPECT_NEAR(to_double(s.entropy_lower.lo), std::log(2.0) / 3, 1e-12);
  EXPECT_NEAR(to_double(s.growth_epsilon.lo), std::cbrt(2.0) - 1, 1e-12);
  BoundChain one = bound_chain(1, CertificateKind::free_group, k);
  EXPECT_NEAR(to_double(one.kappa_lower->lo), std::sqrt(2 - std::sqrt(3.0)) / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(bound_chain(0, CertificateKind::free_group, k), InvalidInput);
}
