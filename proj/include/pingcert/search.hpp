#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pingcert/pingpong.hpp"

namespace pingcert {

struct SearchBudget {
  int max_power = 20;     // every certified word lies in Sigma^max_power
  int max_exponent = 64;  // cap on the powers n of A and on m0
  std::size_t node_cap = 2'000'000;
  std::size_t max_candidates = 5000;  // verifier calls per candidate scan
  unsigned long precision_bits = 256;
  // Ping parameters; unset means the pipeline default
  // (semigroup: 1/10 and 1/2, free: 1/100 and 1/2).
  std::optional<Rational> epsilon;
  std::optional<Rational> r;
};

// Line-oriented decision log. Each line is a step name followed by
// space-separated key=value fields; rationals print as p/q, intervals as
// [lo,hi] rounded outward to multiples of 2^-32.
class Trace {
 public:
  struct Field {
    std::string key;
    std::string value;
    Field(std::string k, std::string v) : key(std::move(k)), value(std::move(v)) {}
    Field(std::string k, const char* v) : key(std::move(k)), value(v) {}
    Field(std::string k, const Rational& v);
    Field(std::string k, const RationalInterval& v);
    Field(std::string k, long v) : key(std::move(k)), value(std::to_string(v)) {}
    Field(std::string k, int v) : key(std::move(k)), value(std::to_string(v)) {}
    Field(std::string k, std::size_t v) : key(std::move(k)), value(std::to_string(v)) {}
  };

  void add(const std::string& step, const std::vector<Field>& fields = {});
  const std::vector<std::string>& lines() const { return lines_; }
  std::string str() const;
  bool operator==(const Trace&) const = default;

 private:
  std::vector<std::string> lines_;
};

struct EscapePredicate {
  enum class Kind { nonidentity, semisimple_infinite_order, moves_point, moves_point_off_hyperplane };
  Kind kind = Kind::nonidentity;
  // Point data for the moves_* predicates, acting through `rep` when set.
  ProjPoint v;
  ProjHyperplane H;
  int j_max = 1;
  Rational epsilon;  // off-hyperplane threshold: d(g^j v, H) >= epsilon
  std::optional<Representation> rep;

  static EscapePredicate nonidentity();
  static EscapePredicate semisimple_infinite_order();
  static EscapePredicate moves_point(ProjPoint v, std::optional<Representation> rep = std::nullopt);
  static EscapePredicate moves_point_off_hyperplane(ProjPoint v, ProjHyperplane H, int j_max, Rational epsilon,
                                                    std::optional<Representation> rep = std::nullopt);
  std::string name() const;
};

struct EscapeResult {
  Word word;
  int k = 0;  // word length: the word lies in Sigma^k
  int j = 1;  // power that satisfied moves_point_off_hyperplane
};

// Shortlex-first element of Sigma^k, k = 1..k_max, satisfying the predicate.
// Sigma^k here means products of at most k generators (exactly Sigma^k when
// e is in Sigma). Throws NotFound when exhausted.
EscapeResult escape_search(const GeneratorSetPtr& s, const EscapePredicate& predicate, int k_max,
                           std::size_t node_cap = 2'000'000, bool parallel = true);

struct ConjugationResult {
  Matrix h;
  GeneratorSet reduced;
  RationalInterval achieved_norm;  // max operator norm over the reduced set
  RationalInterval initial_norm;
};

// Heuristic descent of sum ||h g h^-1||_F^2 over positive definite h, then
// rationalization. Falls back to the identity unless the exact maximum
// operator norm does not increase.
ConjugationResult conjugation_reduce(const GeneratorSet& s);

struct IntegralConjugationResult {
  Matrix gamma;  // integral, determinant 1
  GeneratorSet reduced;
  RationalInterval achieved_norm;
  RationalInterval initial_norm;
};

// LLL-rounds the real conjugator to SL_d(Z). Throws InvalidInput on
// non-integral input.
IntegralConjugationResult integral_conjugation_reduce(const GeneratorSet& s);

struct QuasiDiagonalization {
  Matrix h;
  Matrix a_prime;             // h A h^-1
  RationalInterval lambda1;   // the real eigenvalue of largest modulus
  Rational defect;            // max |a'_{i1}|, |a'_{1j}| over i, j >= 2
  bool norm_check = false;    // ||h|| <= 3^d ||A||^(d^2) held
};

// Requires Lambda(A) >= 2 lambda(A); throws InvalidInput otherwise.
QuasiDiagonalization quasi_diagonalize(const Matrix& a, const Rational& tolerance = Rational(1, 1 << 30));

struct WedgeChoice {
  std::size_t i = 1;
  RationalInterval ratio;   // Lambda / lambda of wedge^i A
  RationalInterval lambda;  // Lambda(A)
};

// Smallest i maximizing Lambda/lambda of wedge^i A. Requires Lambda(A) > 1
// (InvalidInput); throws Undecided when ratio^(d^2) >= Lambda(A) cannot be shown.
WedgeChoice select_wedge_power(const Matrix& a);

// a + b sqrt(D) for the common D of a basis.
struct QuadraticNumber {
  Rational a;
  Rational b;
};

struct QuadraticBasis {
  Integer D = 1;  // field parameter; ignored when every b is 0
  std::vector<std::vector<QuadraticNumber>> vectors;  // u_1 .. u_d
};

struct SeparationBound {
  bool member = false;  // B u_1 lies in span(u_2..u_d) exactly
  Rational bound;       // lower bound on d([B u_1], [H]) when not a member
  int degree = 1;
};

// Requires integral B, algebraic-integer entries, independent vectors and
// M >= max ||sigma(u_i)||. D must be a positive non-square when any b != 0.
SeparationBound separation_lower_bound(const Matrix& B, const QuadraticBasis& basis, const Rational& M);

template <class C>
struct SearchOutcome {
  std::optional<C> certificate;
  int found_in_power = 0;
  Trace trace;
  std::string reason;  // why nothing was found
  bool found() const { return certificate.has_value(); }
};

SearchOutcome<SemigroupCertificate> find_semigroup_pair(const GeneratorSetPtr& s, const SearchBudget& budget = {});
SearchOutcome<FreeGroupCertificate> find_free_pair(const GeneratorSetPtr& s, const SearchBudget& budget = {});

}  // namespace pingcert
