#pragma once

#include <optional>
#include <string>

#include "pingcert/interval.hpp"
#include "pingcert/matrix.hpp"

namespace pingcert {

// A point of projective space, stored as a primitive integer vector whose
// first nonzero coordinate is positive.
class ProjPoint {
 public:
  ProjPoint() = default;
  // Throws InvalidInput on the zero vector.
  explicit ProjPoint(Vector representative);
  const Vector& vec() const { return v_; }
  std::size_t dim() const { return v_.size(); }
  bool operator==(const ProjPoint&) const = default;

 private:
  Vector v_;
};

// A hyperplane, represented by its normal covector.
using ProjHyperplane = ProjPoint;

ProjPoint image(const Matrix& m, const ProjPoint& p);

// sin^2 of the angle between the lines: |x ^ y|^2 / (|x|^2 |y|^2).
Rational proj_distance_sq(const ProjPoint& p, const ProjPoint& q);
// sin^2 of the angle from p to H: <p,n>^2 / (|p|^2 |n|^2).
Rational point_hyperplane_distance_sq(const ProjPoint& p, const ProjHyperplane& h);

struct FrameOptions {
  unsigned long precision_bits = 256;
};

struct Frames {
  ProjPoint v;        // attracting point (top left-singular direction)
  ProjHyperplane H;   // repelling hyperplane: normal = top right-singular direction
  Rational frame_error;
  // Checkable spectral data: mu1 >= gram_top_lo and every other Gram
  // eigenvalue is <= gram_second_hi.
  Rational gram_top_lo;
  Rational gram_second_hi;
  RationalInterval sv_ratio;
};

// Throws Undecided("no singular gap") when a_1 = a_2.
Frames svd_frames(const Matrix& m, const FrameOptions& opts = {});

struct ContractionWitness {
  Rational epsilon;
  Rational r;  // 0 when only contraction is claimed
  ProjPoint v;
  ProjHyperplane H;
  Rational frame_error;
  RationalInterval sv_ratio;
  Rational gram_top_lo;
  Rational gram_second_hi;
};

struct VeryProximalWitness {
  ContractionWitness forward;   // for g
  ContractionWitness backward;  // for g^-1
};

enum class ContractionMode { contracting, proximal, very_proximal };

struct ContractionOutcome {
  bool certified = false;
  std::string reason;  // why not, when not certified
  ContractionWitness forward;
  std::optional<ContractionWitness> backward;
};

// Sufficient singular-value test with explicit frame margins. Never claims
// non-contraction; failures come back with certified = false.
ContractionOutcome contraction_certify(const Matrix& m, const Rational& epsilon, const Rational& r,
                                       ContractionMode mode, const FrameOptions& opts = {});

// Trusted re-check of a witness against m, from the stored rationals and
// exact Sturm counts only. Returns the failed inequality, or nullopt.
std::optional<std::string> check_contraction_witness(const Matrix& m, const ContractionWitness& w, bool proximal);

// Global bound a_1 a_2 / a_d^2 (r unset) or (a_2/a_1) / r^2.
RationalInterval lipschitz_bounds(const Matrix& m, std::optional<Rational> r, const Rational& tolerance);

// Checkable upper bound on the global Lipschitz constant: x_hi >= (a_1 a_2)^2,
// y_hi >= 1/a_d^2 and lip_hi^2 >= x_hi * y_hi^2.
struct LipschitzWitness {
  Rational lip_hi;
  Rational x_hi;
  Rational y_hi;
};
LipschitzWitness lipschitz_witness(const Matrix& m, const Rational& tolerance);
std::optional<std::string> check_lipschitz_witness(const Matrix& m, const LipschitzWitness& w);

}  // namespace pingcert
