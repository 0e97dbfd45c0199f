#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pingcert/polynomial.hpp"
#include "pingcert/rational.hpp"

namespace pingcert {

using Vector = std::vector<Rational>;

// Invertible d x d matrix over Q, row-major. Entries are kept in canonical
// (reduced) form, so equality and hashing are exact.
class Matrix {
 public:
  // Throws InvalidInput when the entry count is wrong or the matrix is singular.
  Matrix(std::size_t dim, std::vector<Rational> entries);
  static Matrix from_rows(const std::vector<std::vector<Rational>>& rows);
  static Matrix identity(std::size_t dim);
  static Matrix diagonal(const std::vector<Rational>& diag);

  std::size_t dim() const { return dim_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  std::span<const Rational> entries() const { return entries_; }

  Matrix operator*(const Matrix& other) const;
  Matrix inverse() const;
  Matrix transpose() const;
  // Negative exponents use the inverse.
  Matrix pow(long n) const;
  // h * this * h^-1
  Matrix conjugated_by(const Matrix& h) const;

  Rational determinant() const;
  Rational trace() const;
  Vector apply(std::span<const Rational> x) const;
  // x^T * this
  Vector apply_left(std::span<const Rational> x) const;

  bool is_identity() const;
  bool is_integral() const;
  bool operator==(const Matrix& other) const { return dim_ == other.dim_ && entries_ == other.entries_; }

  // Reduced fractions, row-major, comma separated: the dedup key.
  std::string canonical() const;
  std::size_t hash() const;
  std::vector<std::vector<std::string>> to_strings() const;

 private:
  struct Unchecked {};
  Matrix(Unchecked, std::size_t dim, std::vector<Rational> entries);

  std::size_t dim_ = 0;
  std::vector<Rational> entries_;
};

struct MatrixHash {
  std::size_t operator()(const Matrix& m) const { return m.hash(); }
};

// Determinant of an arbitrary n x n row-major rational array.
Rational determinant(std::vector<Rational> a, std::size_t n);

// Characteristic polynomial det(xI - m), monic of degree dim.
Polynomial char_poly(const Matrix& m);
// Minimal polynomial (monic).
Polynomial minimal_polynomial(const Matrix& m);

// Lexicographically ordered i-subsets of {0, ..., d-1}: the basis of the i-th
// exterior power, e_{k1} ^ ... ^ e_{ki} with k1 < ... < ki.
std::vector<std::vector<std::size_t>> wedge_basis(std::size_t d, std::size_t i);
// Matrix of i x i minors in the wedge_basis order. Throws InvalidInput unless 1 <= i <= d.
Matrix wedge_power(const Matrix& m, std::size_t i);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
Rational norm_sq(std::span<const Rational> a);

}  // namespace pingcert
