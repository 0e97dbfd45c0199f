#include <gtest/gtest.h>

#include <random>

#include "pingcert/errors.hpp"
#include "pingcert/pingpong.hpp"

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

const Matrix kRot = M({{1, -1}, {1, 1}});  // rotation by 45 degrees up to scale
const Matrix kA = M({{1, 2}, {0, 1}});
const Matrix kB = M({{1, 0}, {2, 1}});

GeneratorSetPtr pair(const Matrix& a, const Matrix& b) { return make_generator_set({a, b}); }

}  // namespace

TEST(Words, NormalizationAndValues) {
  auto s = make_generator_set({Matrix::identity(2), kA, kA.inverse(), kB, kB.inverse()});
  EXPECT_TRUE(s->symmetric());
  EXPECT_TRUE(s->contains_identity());
  Word w = Word::from_signed(s, {2, 1, 4, -2, 3});
  // identity dropped, -2 becomes generator 3, then 4 followed by 3? no cancellation
  EXPECT_EQ(w.signed_indices(), (std::vector<long>{2, 4, 3, 3}));
  EXPECT_EQ(w.matrix(), kA * kB * kA.inverse() * kA.inverse());
  Word c = Word::from_signed(s, {2, 3});
  EXPECT_EQ(c.length(), 0u);
  EXPECT_TRUE(c.matrix().is_identity());
  EXPECT_EQ(w.inverse().matrix(), w.matrix().inverse());
  EXPECT_EQ(Word::from_signed(s, {2, 4}).power(3).matrix(), (kA * kB).pow(3));
  EXPECT_THROW(Word::from_signed(s, {0}), InvalidInput);
  EXPECT_THROW(Word::from_signed(s, {9}), InvalidInput);
}

TEST(PingLemma, DiagonalAndRotation) {
  auto s = pair(Matrix::diagonal({Rational(1000), Rational(1, 1000)}), kRot);
  Word a = Word::from_signed(s, {1}), b = Word::from_signed(s, {2});
  auto v = verify_ping(a, b, Rational(1, 10), Rational(1, 2));
  ASSERT_TRUE(v.certified()) << v.reason;
  const auto& c = *v.certificate;
  EXPECT_EQ(c.witness_a.sv_ratio, RationalInterval(Rational(1, 1000000)));
  EXPECT_EQ(c.bv_h_distance_sq, Rational(1, 2));
  EXPECT_EQ(c.lip_b.lip_hi, 1);
  EXPECT_EQ(c.b_prime.signed_indices(), (std::vector<long>{2, 1}));
  EXPECT_FALSE(check_certificate(c));
  EXPECT_FALSE(relation_oracle(a.matrix(), c.b_prime.matrix(), 8, true));
}

TEST(PingLemma, Rejections) {
  auto s = pair(Matrix::diagonal({Rational(1000), Rational(1, 1000)}), Matrix::identity(2));
  Word a = Word::from_signed(s, {1}), b = Word::from_signed(s, {2});
  auto eps = verify_ping(a, b, Rational(1, 2), Rational(1, 2));
  EXPECT_FALSE(eps.certified());
  EXPECT_NE(eps.reason.find("epsilon <= 1/3"), std::string::npos);
  auto same = verify_ping(a, b, Rational(1, 10), Rational(1, 2));
  EXPECT_FALSE(same.certified());
  EXPECT_EQ(same.reason, "bv = v");
  auto r = verify_ping(a, b, Rational(1, 10), Rational(1, 25));
  EXPECT_NE(r.reason.find("r > 4*epsilon^2"), std::string::npos);
}

TEST(PingLemma, TamperDetected) {
  auto s = pair(Matrix::diagonal({Rational(1000), Rational(1, 1000)}), kRot);
  Word a = Word::from_signed(s, {1}), b = Word::from_signed(s, {2});
  auto c = *verify_ping(a, b, Rational(1, 10), Rational(1, 2)).certificate;
  auto t = c;
  t.bv_h_distance_sq = Rational(9, 10);
  EXPECT_TRUE(check_certificate(t));
  t = c;
  t.lip_b.lip_hi = Rational(1, 2);
  EXPECT_TRUE(check_certificate(t));
  t = c;
  t.epsilon = Rational(1, 2);
  EXPECT_TRUE(check_certificate(t));
}

TEST(PingPong, DiagonalAndRotatedCopy) {
  Matrix a = Matrix::diagonal({Rational(100), Rational(1, 100)});
  auto s = pair(a, a.conjugated_by(kRot));
  Word wa = Word::from_signed(s, {1}), wb = Word::from_signed(s, {2});
  auto v = verify_pingpong(wa, wb, Rational(1, 100), Rational(1, 2));
  ASSERT_TRUE(v.certified()) << v.reason;
  for (const auto& x : v.certificate->cross_separations) EXPECT_EQ(x, Rational(1, 2));
  EXPECT_FALSE(check_certificate(*v.certificate));
  EXPECT_FALSE(relation_oracle(wa.matrix(), wb.matrix(), 8, false));
  auto t = *v.certificate;
  t.cross_separations[3] = 1;
  EXPECT_TRUE(check_certificate(t));
}

TEST(PingPong, Rejections) {
  Matrix a = Matrix::diagonal({Rational(100), Rational(1, 100)});
  auto s = pair(a, a);
  auto same = verify_pingpong(Word::from_signed(s, {1}), Word::from_signed(s, {2}), Rational(1, 100), Rational(1, 2));
  EXPECT_FALSE(same.certified());
  EXPECT_EQ(same.reason, "d(v_a,H_b^-1) >= r + 2*frame_error");
  auto s2 = pair(Matrix::identity(2), a);
  auto id = verify_pingpong(Word::from_signed(s2, {2}), Word::from_signed(s2, {2}), Rational(1, 100), Rational(1, 2));
  EXPECT_FALSE(id.certified());
  auto s3 = make_generator_set({M({{2, 0}, {0, 1}}), a});
  auto idw = verify_pingpong(Word(s3), Word::from_signed(s3, {2}), Rational(1, 100), Rational(1, 2));
  EXPECT_FALSE(idw.certified());
  EXPECT_NE(idw.reason.find("a is very proximal"), std::string::npos);
}

TEST(RelationOracle, Examples) {
  EXPECT_FALSE(relation_oracle(kA, kB, 10, false));
  auto inv = relation_oracle(kA, kA.inverse(), 4, false);
  ASSERT_TRUE(inv);
  // a^-1 and b coincide at length 1; the relator is a b = e.
  EXPECT_EQ(word_string(inv->earlier), "A");
  EXPECT_EQ(word_string(inv->later), "b");
  EXPECT_EQ(word_string(inv->relator), "ab");
  auto comm = relation_oracle(Matrix::diagonal({Rational(2), Rational(1, 2)}),
                              Matrix::diagonal({Rational(3), Rational(1, 3)}), 4, true);
  ASSERT_TRUE(comm);
  EXPECT_EQ(word_string(comm->earlier), "ab");
  EXPECT_EQ(word_string(comm->later), "ba");
  EXPECT_THROW(relation_oracle(kA, kB, 10, false, {100, true}), BudgetExceeded);
  try {
    relation_oracle(kA, kB, 10, false, {100, true});
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.complete(), 3);  // 1 + 4 + 12 + 36 = 53 nodes fit, level 4 does not
  }
}

TEST(RelationOracle, SerialMatchesParallel) {
  Matrix x = M({{1, 1}, {0, 1}}), y = M({{1, 0}, {1, 1}});  // SL2(Z) generators, relations exist
  auto p = relation_oracle(x, y, 8, false, {1'000'000, true});
  auto s = relation_oracle(x, y, 8, false, {1'000'000, false});
  ASSERT_EQ(p.has_value(), s.has_value());
  if (p) {
    EXPECT_EQ(p->earlier, s->earlier);
    EXPECT_EQ(p->later, s->later);
  }
}
