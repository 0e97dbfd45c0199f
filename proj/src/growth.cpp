#include "pingcert/growth.hpp"

#include <unordered_map>
#include <unordered_set>

#include "pingcert/errors.hpp"

namespace pingcert {

Ball ball_enumerate(const GeneratorSet& s, int radius, const BallOptions& opts) {
  if (radius < 0) throw InvalidInput("radius must be nonnegative");
  Ball ball;
  std::unordered_set<Matrix, MatrixHash> seen;
  ball.elements.push_back(Matrix::identity(s.dim()));
  seen.insert(ball.elements.back());
  ball.layer_start = {0, 1};
  ball.sizes = {1};
  for (int n = 1; n <= radius; ++n) {
    std::size_t lo = ball.layer_start[n - 1], hi = ball.layer_start[n];
    std::size_t count = (hi - lo) * s.size();
    std::vector<std::optional<Matrix>> products(count);
    // Products are independent; insertion below is serial and in scan order,
    // so the result does not depend on the schedule.
#pragma omp parallel for schedule(dynamic, 64) if (opts.parallel)
    for (std::size_t k = 0; k < count; ++k) products[k] = ball.elements[lo + k / s.size()] * s[k % s.size()];
    for (auto& p : products) {
      if (seen.insert(*p).second) {
        if (ball.elements.size() >= opts.node_cap) throw BudgetExceeded("ball enumeration node cap exceeded", n - 1);
        ball.elements.push_back(std::move(*p));
      }
    }
    ball.layer_start.push_back(ball.elements.size());
    ball.sizes.push_back(ball.elements.size());
  }
  return ball;
}

Ball ball_enumerate_serial(const GeneratorSet& s, int radius, std::size_t node_cap) {
  if (radius < 0) throw InvalidInput("radius must be nonnegative");
  Ball ball;
  std::unordered_map<std::string, std::size_t> seen;
  ball.elements.push_back(Matrix::identity(s.dim()));
  seen.emplace(ball.elements.back().canonical(), 0);
  ball.layer_start = {0, 1};
  ball.sizes = {1};
  for (int n = 1; n <= radius; ++n) {
    std::size_t lo = ball.layer_start[n - 1], hi = ball.layer_start[n];
    for (std::size_t i = lo; i < hi; ++i)
      for (const auto& g : s.matrices()) {
        Matrix p = ball.elements[i] * g;
        if (seen.emplace(p.canonical(), ball.elements.size()).second) {
          if (ball.elements.size() >= node_cap) throw BudgetExceeded("ball enumeration node cap exceeded", n - 1);
          ball.elements.push_back(std::move(p));
        }
      }
    ball.layer_start.push_back(ball.elements.size());
    ball.sizes.push_back(ball.elements.size());
  }
  return ball;
}

GrowthReport growth_report(const GeneratorSet& s, int radius, unsigned long log_bits, const BallOptions& opts) {
  Ball ball = ball_enumerate(s, radius, opts);
  GrowthReport rep;
  rep.ball_sizes = ball.sizes;
  for (int n = 1; n <= radius; ++n) {
    RationalInterval l = log_interval(Rational(static_cast<unsigned long>(ball.sizes[n])), log_bits);
    rep.entropy_estimates.push_back(l / RationalInterval(Rational(n)));
  }
  // Radius of each element, for membership tests against Sigma^n.
  std::unordered_map<Matrix, int, MatrixHash> radius_of;
  for (int n = 0; n <= radius; ++n)
    for (std::size_t i = ball.layer_start[n]; i < ball.layer_start[n + 1]; ++i) radius_of.emplace(ball.elements[i], n);
  std::vector<Matrix> inverses;
  for (const auto& g : s.matrices()) inverses.push_back(g.inverse());
  // x lies in the inner boundary of Sigma^n iff s^-1 x falls outside Sigma^n
  // for some s; record the least radius at which x stops being a boundary point.
  std::vector<int> deepest(ball.elements.size());
#pragma omp parallel for schedule(dynamic, 64) if (opts.parallel)
  for (std::size_t i = 0; i < ball.elements.size(); ++i) {
    int worst = 0;
    for (const auto& si : inverses) {
      auto it = radius_of.find(si * ball.elements[i]);
      int r = it == radius_of.end() ? radius + 1 : it->second;
      worst = std::max(worst, r);
    }
    deepest[i] = worst;
  }
  for (int n = 0; n <= radius; ++n) {
    std::size_t boundary = 0;
    for (std::size_t i = 0; i < ball.layer_start[n + 1]; ++i)
      if (deepest[i] > n) ++boundary;
    rep.cheeger_ratios.emplace_back(Rational(static_cast<unsigned long>(boundary)) /
                                    Rational(static_cast<unsigned long>(ball.sizes[n])));
  }
  return rep;
}

RationalInterval default_kappa_f2(unsigned long bits) {
  RationalInterval s3 = sqrt_interval(Rational(3), bits + 8);
  return sqrt_interval(RationalInterval(Rational(2)) - s3, bits);
}

BoundChain bound_chain(int found_in_power, CertificateKind kind, const RationalInterval& kappa_f2,
                       unsigned long bits) {
  if (found_in_power < 1) throw InvalidInput("found_in_power must be at least 1");
  if (kappa_f2.lo <= 0) throw InvalidInput("kappa_F2 must be a positive interval");
  BoundChain c;
  c.kappa_f2 = kappa_f2;
  c.d_pi = found_in_power;
  RationalInterval d{Rational(found_in_power)};
  if (kind == CertificateKind::free_group) {
    c.d_free = found_in_power;
    c.kappa_lower = (kappa_f2 / (sqrt_interval(Rational(2), bits) * d)).rounded(bits);
    c.h_lower = (pow(kappa_f2, 2) / (RationalInterval(Rational(8)) * d * d)).rounded(bits);
  }
  c.entropy_lower = (log_interval(Rational(2), bits) / d).rounded(bits);
  c.growth_epsilon =
      (root_interval(RationalInterval(Rational(2)), static_cast<unsigned long>(found_in_power), bits) -
       RationalInterval(Rational(1)))
          .rounded(bits);
  return c;
}

}  // namespace pingcert
