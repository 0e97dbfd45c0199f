#include "pingcert/pingpong.hpp"

#include <algorithm>
#include <unordered_map>

#include "pingcert/errors.hpp"

namespace pingcert {

Representation Representation::trivial(std::size_t dim) { return {Matrix::identity(dim), 1}; }

Matrix Representation::apply(const Matrix& g) const {
  Matrix c = conjugator.is_identity() ? g : g.conjugated_by(conjugator);
  return wedge == 1 ? c : wedge_power(c, wedge);
}

std::size_t Representation::dim() const {
  std::size_t d = conjugator.dim(), n = 1;
  for (std::size_t k = 0; k < wedge; ++k) n = n * (d - k) / (k + 1);
  return n;
}

namespace {

const Rational kLipTolerance(1, 1 << 20);

std::optional<std::string> rep_problem(const GeneratorSetPtr& gens, const Representation& rep) {
  if (!gens) return "missing generators";
  if (rep.conjugator.dim() != gens->dim()) return "conjugator dimension matches the generators";
  if (rep.wedge < 1 || rep.wedge > gens->dim()) return "wedge index in 1..d";
  if (rep.dim() < 2) return "representation dimension at least 2";
  return std::nullopt;
}

int power_of(const Word& w) { return static_cast<int>(std::max<std::size_t>(w.length(), 1)); }

std::optional<std::string> ping_clauses(const Matrix& rb, const ContractionWitness& wa, const Rational& eps,
                                        Rational& bv_h, Rational& bv_v) {
  ProjPoint bv = image(rb, wa.v);
  bv_v = proj_distance_sq(bv, wa.v);
  bv_h = point_hyperplane_distance_sq(bv, wa.H);
  if (bv_v == 0) return "bv = v";
  Rational sep = eps * eps * eps + eps * eps;
  if (bv_v <= sep * sep) return "d(bv,v) > epsilon^3 + epsilon^2";
  if (bv_h < eps * eps) return "d(bv,H) >= epsilon";
  return std::nullopt;
}

std::optional<std::string> ping_preconditions(const Rational& eps, const Rational& r) {
  if (eps <= 0) return "epsilon > 0";
  if (eps > Rational(1, 3)) return "epsilon <= 1/3 (ping lemma hypothesis)";
  if (r <= 4 * eps * eps) return "r > 4*epsilon^2 (ping lemma hypothesis)";
  return std::nullopt;
}

// Points and hyperplanes in the kCrossNames order.
std::array<Rational, 8> cross(const VeryProximalWitness& a, const VeryProximalWitness& b) {
  return {point_hyperplane_distance_sq(a.forward.v, b.forward.H),
          point_hyperplane_distance_sq(a.forward.v, b.backward.H),
          point_hyperplane_distance_sq(a.backward.v, b.forward.H),
          point_hyperplane_distance_sq(a.backward.v, b.backward.H),
          point_hyperplane_distance_sq(b.forward.v, a.forward.H),
          point_hyperplane_distance_sq(b.forward.v, a.backward.H),
          point_hyperplane_distance_sq(b.backward.v, a.forward.H),
          point_hyperplane_distance_sq(b.backward.v, a.backward.H)};
}

Rational max_error(const VeryProximalWitness& a, const VeryProximalWitness& b) {
  return std::max({a.forward.frame_error, a.backward.frame_error, b.forward.frame_error, b.backward.frame_error});
}

std::optional<std::string> separation_clauses(const FreeGroupCertificate& c) {
  Rational need = c.r + 2 * max_error(c.witness_a, c.witness_b);
  for (std::size_t k = 0; k < 8; ++k)
    if (c.cross_separations[k] < need * need) return std::string(kCrossNames[k]) + " >= r + 2*frame_error";
  const ProjPoint* av[2] = {&c.witness_a.forward.v, &c.witness_a.backward.v};
  const ProjPoint* bv[2] = {&c.witness_b.forward.v, &c.witness_b.backward.v};
  Rational low = c.r - 2 * c.epsilon;
  for (auto* x : av)
    for (auto* y : bv) {
      Rational d = proj_distance_sq(*x, *y);
      if (d <= 4 * c.epsilon * c.epsilon) return "attracting points of a and b more than 2*epsilon apart";
      if (low > 0 && d < low * low) return "attracting points of a and b at least r - 2*epsilon apart";
    }
  return std::nullopt;
}

}  // namespace

Verdict<SemigroupCertificate> verify_ping(const Word& a, const Word& b, const Rational& epsilon, const Rational& r,
                                          const Representation& rep, const FrameOptions& opts) {
  Verdict<SemigroupCertificate> out;
  if (auto p = rep_problem(a.generators(), rep)) throw InvalidInput(*p);
  if (auto p = ping_preconditions(epsilon, r)) {
    out.reason = *p;
    return out;
  }
  Matrix ra = rep.apply(a.matrix()), rb = rep.apply(b.matrix());
  Rational eps3 = epsilon * epsilon * epsilon;
  ContractionOutcome wa = contraction_certify(ra, eps3, r, ContractionMode::proximal, opts);
  if (!wa.certified) {
    out.reason = "a is (r, epsilon^3)-proximal: " + wa.reason;
    return out;
  }
  SemigroupCertificate c{a.generators(), rep, a, b, b * a, epsilon, r, wa.forward, 0, 0, {}, 0};
  if (auto p = ping_clauses(rb, c.witness_a, epsilon, c.bv_h_distance_sq, c.bv_v_distance_sq)) {
    out.reason = *p;
    return out;
  }
  c.lip_b = lipschitz_witness(rb, kLipTolerance);
  if (c.lip_b.lip_hi * epsilon > 1) {
    out.reason = "Lip(b) <= 1/epsilon";
    return out;
  }
  c.found_in_power = std::max(power_of(c.a), power_of(c.b_prime));
  out.certificate = std::move(c);
  return out;
}

Verdict<SemigroupCertificate> verify_ping(const Word& a, const Word& b, const Rational& epsilon, const Rational& r) {
  return verify_ping(a, b, epsilon, r, Representation::trivial(a.generators()->dim()));
}

Verdict<FreeGroupCertificate> verify_pingpong(const Word& a, const Word& b, const Rational& epsilon,
                                              const Rational& r, const Representation& rep,
                                              const FrameOptions& opts) {
  Verdict<FreeGroupCertificate> out;
  if (auto p = rep_problem(a.generators(), rep)) throw InvalidInput(*p);
  if (epsilon <= 0) {
    out.reason = "epsilon > 0";
    return out;
  }
  if (r <= 2 * epsilon) {
    out.reason = "r > 2*epsilon (ping-pong hypothesis)";
    return out;
  }
  Matrix ra = rep.apply(a.matrix()), rb = rep.apply(b.matrix());
  auto wa = contraction_certify(ra, epsilon, r, ContractionMode::very_proximal, opts);
  if (!wa.certified) {
    out.reason = "a is very proximal: " + wa.reason;
    return out;
  }
  auto wb = contraction_certify(rb, epsilon, r, ContractionMode::very_proximal, opts);
  if (!wb.certified) {
    out.reason = "b is very proximal: " + wb.reason;
    return out;
  }
  FreeGroupCertificate c{a.generators(), rep, a, b, epsilon, r, {wa.forward, *wa.backward},
                         {wb.forward, *wb.backward}, {}, 0};
  c.cross_separations = cross(c.witness_a, c.witness_b);
  if (auto p = separation_clauses(c)) {
    out.reason = *p;
    return out;
  }
  c.found_in_power = std::max(power_of(a), power_of(b));
  out.certificate = std::move(c);
  return out;
}

Verdict<FreeGroupCertificate> verify_pingpong(const Word& a, const Word& b, const Rational& epsilon,
                                              const Rational& r) {
  return verify_pingpong(a, b, epsilon, r, Representation::trivial(a.generators()->dim()));
}

std::optional<std::string> check_certificate(const SemigroupCertificate& c) {
  if (auto p = rep_problem(c.generators, c.rep)) return p;
  if (auto p = ping_preconditions(c.epsilon, c.r)) return p;
  // Recompute the words from the generators alone.
  Word a(c.generators, c.a.letters()), b(c.generators, c.b.letters());
  Word bp(c.generators, c.b_prime.letters());
  if (!(bp == b * a)) return "b_prime = b * a";
  if (!a.positive() || !bp.positive()) return "certified words are products of generators";
  if (c.found_in_power < std::max(power_of(a), power_of(bp))) return "found_in_power >= word lengths";
  Matrix ra = c.rep.apply(a.matrix()), rb = c.rep.apply(b.matrix());
  Rational eps3 = c.epsilon * c.epsilon * c.epsilon;
  if (c.witness_a.epsilon != eps3 || c.witness_a.r != c.r) return "witness_a parameters are (r, epsilon^3)";
  if (auto p = check_contraction_witness(ra, c.witness_a, true)) return "witness_a: " + *p;
  Rational bv_h, bv_v;
  auto p = ping_clauses(rb, c.witness_a, c.epsilon, bv_h, bv_v);
  if (bv_h != c.bv_h_distance_sq) return "stored d(bv,H)^2 matches";
  if (bv_v != c.bv_v_distance_sq) return "stored d(bv,v)^2 matches";
  if (p) return p;
  if (auto q = check_lipschitz_witness(rb, c.lip_b)) return "lip_b: " + *q;
  if (c.lip_b.lip_hi * c.epsilon > 1) return "Lip(b) <= 1/epsilon";
  return std::nullopt;
}

std::optional<std::string> check_certificate(const FreeGroupCertificate& c) {
  if (auto p = rep_problem(c.generators, c.rep)) return p;
  if (c.epsilon <= 0) return "epsilon > 0";
  if (c.r <= 2 * c.epsilon) return "r > 2*epsilon (ping-pong hypothesis)";
  Word a(c.generators, c.a.letters()), b(c.generators, c.b.letters());
  if (a.length() == 0 || b.length() == 0) return "nonempty words";
  if (c.found_in_power < std::max(power_of(a), power_of(b))) return "found_in_power >= word lengths";
  Matrix ra = c.rep.apply(a.matrix()), rb = c.rep.apply(b.matrix());
  const std::pair<const ContractionWitness*, Matrix> parts[4] = {{&c.witness_a.forward, ra},
                                                                 {&c.witness_a.backward, ra.inverse()},
                                                                 {&c.witness_b.forward, rb},
                                                                 {&c.witness_b.backward, rb.inverse()}};
  const char* names[4] = {"witness_a.forward", "witness_a.backward", "witness_b.forward", "witness_b.backward"};
  for (int k = 0; k < 4; ++k) {
    const ContractionWitness& w = *parts[k].first;
    if (w.epsilon != c.epsilon || w.r != c.r) return std::string(names[k]) + " parameters are (r, epsilon)";
    if (auto p = check_contraction_witness(parts[k].second, w, true)) return std::string(names[k]) + ": " + *p;
  }
  auto recomputed = cross(c.witness_a, c.witness_b);
  for (std::size_t k = 0; k < 8; ++k)
    if (recomputed[k] != c.cross_separations[k]) return std::string("stored ") + kCrossNames[k] + "^2 matches";
  return separation_clauses(c);
}

std::string word_string(const std::vector<long>& w) {
  if (w.empty()) return "e";
  std::string s;
  for (long k : w) {
    char base = static_cast<char>('a' + (std::abs(k) - 1));
    s += k > 0 ? base : static_cast<char>(base - 'a' + 'A');
  }
  return s;
}

std::optional<Relation> relation_oracle(const Matrix& a, const Matrix& b, int max_len, bool semigroup,
                                        const OracleOptions& opts) {
  if (max_len < 1) throw InvalidInput("max_len must be at least 1");
  if (a.dim() != b.dim()) throw InvalidInput("oracle matrices differ in dimension");
  std::vector<long> alphabet = semigroup ? std::vector<long>{1, 2} : std::vector<long>{1, -1, 2, -2};
  std::vector<Matrix> letter_value;
  for (long l : alphabet) {
    const Matrix& m = std::abs(l) == 1 ? a : b;
    letter_value.push_back(l > 0 ? m : m.inverse());
  }
  struct Node {
    std::vector<long> word;
    Matrix value;
  };
  std::unordered_map<Matrix, std::size_t, MatrixHash> seen;
  std::vector<std::vector<long>> words;
  std::vector<Node> level{{{}, Matrix::identity(a.dim())}};
  seen.emplace(level[0].value, 0);
  words.push_back({});
  std::size_t total = 1;
  for (int len = 1; len <= max_len; ++len) {
    // Children in shortlex order: parents are sorted, letters in alphabet order.
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t p = 0; p < level.size(); ++p)
      for (std::size_t l = 0; l < alphabet.size(); ++l) {
        if (!semigroup && !level[p].word.empty() && level[p].word.back() == -alphabet[l]) continue;
        slots.emplace_back(p, l);
      }
    if (total + slots.size() > opts.node_cap)
      throw BudgetExceeded("relation oracle node cap exceeded", len - 1);
    std::vector<std::optional<Matrix>> values(slots.size());
#pragma omp parallel for schedule(dynamic, 64) if (opts.parallel)
    for (std::size_t k = 0; k < slots.size(); ++k)
      values[k] = level[slots[k].first].value * letter_value[slots[k].second];
    std::vector<Node> next;
    next.reserve(slots.size());
    for (std::size_t k = 0; k < slots.size(); ++k) {
      std::vector<long> w = level[slots[k].first].word;
      w.push_back(alphabet[slots[k].second]);
      auto [it, inserted] = seen.emplace(*values[k], words.size());
      if (!inserted) {
        Relation rel{words[it->second], w, {}};
        if (!semigroup) {
          for (auto e = rel.earlier.rbegin(); e != rel.earlier.rend(); ++e) rel.relator.push_back(-*e);
          for (long l : rel.later) {
            if (!rel.relator.empty() && rel.relator.back() == -l) rel.relator.pop_back();
            else rel.relator.push_back(l);
          }
        }
        return rel;
      }
      words.push_back(w);
      next.push_back({std::move(w), std::move(*values[k])});
    }
    total += slots.size();
    level = std::move(next);
  }
  return std::nullopt;
}

}  // namespace pingcert
