#pragma once

#include <optional>
#include <vector>

#include "pingcert/algebraic.hpp"
#include "pingcert/interval.hpp"
#include "pingcert/matrix.hpp"

namespace pingcert {

struct ModulusBounds {
  RationalInterval lambda_max;     // largest eigenvalue modulus
  RationalInterval lambda_second;  // second largest (with multiplicity)
};

struct NormBounds {
  RationalInterval op_norm;   // a_1
  RationalInterval sv_ratio;  // a_2 / a_1
};

struct SpectralData {
  Polynomial char_poly;
  RationalInterval lambda_max;
  RationalInterval lambda_second;
  RationalInterval op_norm;
  RationalInterval sv_ratio;
};

// Intervals of width <= tolerance. For d = 1 the second modulus and the
// singular ratio are reported as [0,0].
ModulusBounds eigen_modulus_bounds(const Matrix& m, const Rational& tolerance);
NormBounds operator_norm_bounds(const Matrix& m, const Rational& tolerance);
SpectralData spectral_data(const Matrix& m, const Rational& tolerance);

// Upper bound on the Euclidean operator norm (cheap, used by searches).
Rational op_norm_upper(const Matrix& m, const Rational& tolerance);

// Partial products P_k = |z_1 ... z_k| of the eigenvalue moduli sorted
// decreasingly, k = 0..d (P_0 = 1, P_d = |det|).
std::vector<RationalInterval> modulus_products(const Matrix& m, const Rational& tolerance);

// Exact squared singular-value data: mu1 = a_1^2, mu12 = (a_1 a_2)^2, and
// inv_mu = 1 / a_d^2 (top eigenvalue of the Gram matrix of m^-1).
struct GramSpectrum {
  Polynomial gram_poly;
  AlgebraicReal mu1;
  std::optional<AlgebraicReal> mu12;
  AlgebraicReal inv_mu;
};
GramSpectrum gram_spectrum(const Matrix& m);
// Enclosure of a_2^2 = mu12 / mu1 at roughly the given width.
RationalInterval second_gram_eigenvalue(GramSpectrum& g, const Rational& tolerance);

// Global Lipschitz constant a_1 a_2 / a_d^2 of the action on projective space.
RationalInterval global_lipschitz(const Matrix& m, const Rational& tolerance);
// Lipschitz constant (a_2/a_1) / r^2 away from the r-neighbourhood of the
// repelling hyperplane.
RationalInterval local_lipschitz(const Matrix& m, const Rational& r, const Rational& tolerance);

struct ElementClass {
  bool torsion = false;
  unsigned long order = 0;  // valid when torsion
  bool semisimple = false;
};
ElementClass classify_element(const Matrix& m);

// x^(1/k) enclosed within width `tolerance`, refining x as needed.
RationalInterval root_enclosure(AlgebraicReal& x, unsigned long k, const Rational& tolerance);

// Bits of dyadic precision sufficient for the given width.
unsigned long bits_for(const Rational& tolerance);

}  // namespace pingcert
