#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pingcert/projective.hpp"
#include "pingcert/word.hpp"

namespace pingcert {

// rho(g) = wedge^i (h g h^-1): the linear representation in which a
// certificate's projective dynamics take place.
struct Representation {
  Matrix conjugator;
  std::size_t wedge = 1;

  static Representation trivial(std::size_t dim);
  Matrix apply(const Matrix& g) const;
  std::size_t dim() const;
};

struct SemigroupCertificate {
  GeneratorSetPtr generators;
  Representation rep;
  Word a;
  Word b;
  Word b_prime;  // b * a: the certified pair is (a, b_prime)
  Rational epsilon;
  Rational r;
  ContractionWitness witness_a;  // (r, epsilon^3)-proximality of rho(a)
  Rational bv_h_distance_sq;     // d(rho(b) v, H)^2
  Rational bv_v_distance_sq;     // d(rho(b) v, v)^2
  LipschitzWitness lip_b;
  int found_in_power = 0;
};

// Cross separations, in this order: v(a) vs H(b), v(a) vs H(b^-1),
// v(a^-1) vs H(b), v(a^-1) vs H(b^-1), then the same with a and b swapped.
inline constexpr std::array<const char*, 8> kCrossNames = {
    "d(v_a,H_b)",   "d(v_a,H_b^-1)",   "d(v_a^-1,H_b)",   "d(v_a^-1,H_b^-1)",
    "d(v_b,H_a)",   "d(v_b,H_a^-1)",   "d(v_b^-1,H_a)",   "d(v_b^-1,H_a^-1)"};

struct FreeGroupCertificate {
  GeneratorSetPtr generators;
  Representation rep;
  Word a;
  Word b;
  Rational epsilon;
  Rational r;
  VeryProximalWitness witness_a;
  VeryProximalWitness witness_b;
  std::array<Rational, 8> cross_separations;  // squared distances
  int found_in_power = 0;
};

template <class C>
struct Verdict {
  std::optional<C> certificate;
  std::string reason;  // failed clause when not certified
  bool certified() const { return certificate.has_value(); }
};

Verdict<SemigroupCertificate> verify_ping(const Word& a, const Word& b, const Rational& epsilon, const Rational& r,
                                          const Representation& rep, const FrameOptions& opts = {});
Verdict<SemigroupCertificate> verify_ping(const Word& a, const Word& b, const Rational& epsilon, const Rational& r);

Verdict<FreeGroupCertificate> verify_pingpong(const Word& a, const Word& b, const Rational& epsilon,
                                              const Rational& r, const Representation& rep,
                                              const FrameOptions& opts = {});
Verdict<FreeGroupCertificate> verify_pingpong(const Word& a, const Word& b, const Rational& epsilon,
                                              const Rational& r);

// Trusted checkers: every inequality is recomputed from the stored rationals,
// the generators and exact Sturm counts. nullopt means valid.
std::optional<std::string> check_certificate(const SemigroupCertificate& c);
std::optional<std::string> check_certificate(const FreeGroupCertificate& c);

// Words over {a, b} (semigroup) or {a, a^-1, b, b^-1} (group) as signed
// indices 1 = a, 2 = b. `earlier` precedes `later` in shortlex order and both
// evaluate to the same matrix.
struct Relation {
  std::vector<long> earlier;
  std::vector<long> later;
  // Group mode: the reduced word earlier^-1 * later, which evaluates to e.
  std::vector<long> relator;
};

struct OracleOptions {
  std::size_t node_cap = 5'000'000;
  bool parallel = true;
};

// First collision in shortlex order among all positive (semigroup) or
// reduced (group) words of length <= max_len, including the empty word.
// Throws BudgetExceeded past the node cap.
std::optional<Relation> relation_oracle(const Matrix& a, const Matrix& b, int max_len, bool semigroup,
                                        const OracleOptions& opts = {});

std::string word_string(const std::vector<long>& w);

}  // namespace pingcert
