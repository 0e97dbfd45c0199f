#pragma once

#include <optional>
#include <vector>

#include "pingcert/interval.hpp"
#include "pingcert/word.hpp"

namespace pingcert {

struct BallOptions {
  std::size_t node_cap = 20'000'000;
  bool parallel = true;
};

// Elements of the Cayley ball in breadth-first order: layer k holds the
// elements first reached by products of k generators. With e in Sigma the
// ball of radius n is exactly Sigma^n.
struct Ball {
  std::vector<Matrix> elements;
  std::vector<std::size_t> layer_start;  // layer k occupies [layer_start[k], layer_start[k+1])
  std::vector<std::size_t> sizes;        // #Sigma^n, n = 0..N
};

// Throws BudgetExceeded (with the last complete radius) past the node cap.
Ball ball_enumerate(const GeneratorSet& s, int radius, const BallOptions& opts = {});
// Reference implementation kept for testing and benchmarks: no threads, no hashing shortcuts.
Ball ball_enumerate_serial(const GeneratorSet& s, int radius, std::size_t node_cap = 20'000'000);

struct GrowthReport {
  std::vector<std::size_t> ball_sizes;
  // entropy_estimates[n-1] encloses (1/n) log #Sigma^n, n = 1..N.
  std::vector<RationalInterval> entropy_estimates;
  // cheeger_ratios[n] = #(inner boundary of Sigma^n) / #Sigma^n: upper-bound data only.
  std::vector<Rational> cheeger_ratios;
};

GrowthReport growth_report(const GeneratorSet& s, int radius, unsigned long log_bits = 64,
                           const BallOptions& opts = {});

enum class CertificateKind { free_group, semigroup };

struct BoundChain {
  int d_free = 0;  // 0 when only a semigroup certificate is known
  int d_pi = 0;
  RationalInterval kappa_f2;
  std::optional<RationalInterval> kappa_lower;  // kappa_F2 / (sqrt(2) d_free)
  std::optional<RationalInterval> h_lower;      // kappa_F2^2 / (8 d_free^2)
  RationalInterval entropy_lower;               // log 2 / d_pi
  RationalInterval growth_epsilon;              // 2^(1/d_pi) - 1
};

// A free-group certificate also bounds d_pi (free implies positively independent).
BoundChain bound_chain(int found_in_power, CertificateKind kind, const RationalInterval& kappa_f2,
                       unsigned long bits = 80);

// sqrt(2 - sqrt(3)): Kazhdan bound for the standard generators of F_2 coming
// from the spectral radius sqrt(3)/2 of the simple random walk.
RationalInterval default_kappa_f2(unsigned long bits = 80);

}  // namespace pingcert
