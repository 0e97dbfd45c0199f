#include "pingcert/matrix.hpp"

#include <functional>

#include "pingcert/errors.hpp"

namespace pingcert {

Rational determinant(std::vector<Rational> a, std::size_t n) {
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot * n + c] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[pivot * n + k], a[c * n + k]);
      det = -det;
    }
    const Rational p = a[c * n + c];
    det *= p;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r * n + c] == 0) continue;
      Rational f = a[r * n + c] / p;
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

Matrix::Matrix(Unchecked, std::size_t dim, std::vector<Rational> entries) : dim_(dim), entries_(std::move(entries)) {}

Matrix::Matrix(std::size_t dim, std::vector<Rational> entries) : dim_(dim), entries_(std::move(entries)) {
  if (dim_ == 0) throw InvalidInput("matrix dimension must be positive");
  if (entries_.size() != dim_ * dim_) throw InvalidInput("matrix entry count does not match dimension");
  for (auto& e : entries_) e.canonicalize();
  if (pingcert::determinant(entries_, dim_) == 0) throw InvalidInput("matrix is singular");
}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  std::size_t d = rows.size();
  std::vector<Rational> e;
  e.reserve(d * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw InvalidInput("matrix rows must have length equal to the row count");
    e.insert(e.end(), r.begin(), r.end());
  }
  return Matrix(d, std::move(e));
}

Matrix Matrix::identity(std::size_t dim) {
  if (dim == 0) throw InvalidInput("matrix dimension must be positive");
  std::vector<Rational> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1;
  return Matrix(Unchecked{}, dim, std::move(e));
}

Matrix Matrix::diagonal(const std::vector<Rational>& diag) {
  std::size_t d = diag.size();
  std::vector<Rational> e(d * d);
  for (std::size_t i = 0; i < d; ++i) e[i * d + i] = diag[i];
  return Matrix(d, std::move(e));
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (dim_ != o.dim_) throw InvalidInput("matrix dimension mismatch");
  std::size_t n = dim_;
  std::vector<Rational> r(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Rational& a = entries_[i * n + k];
      if (a == 0) continue;
      for (std::size_t j = 0; j < n; ++j) r[i * n + j] += a * o.entries_[k * n + j];
    }
  return Matrix(Unchecked{}, n, std::move(r));
}

Matrix Matrix::inverse() const {
  std::size_t n = dim_;
  std::vector<Rational> a(entries_);
  std::vector<Rational> inv(n * n);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (a[pivot * n + c] == 0) ++pivot;
    if (pivot != c)
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a[pivot * n + k], a[c * n + k]);
        std::swap(inv[pivot * n + k], inv[c * n + k]);
      }
    Rational p = a[c * n + c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c * n + k] /= p;
      inv[c * n + k] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r * n + c] == 0) continue;
      Rational f = a[r * n + c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r * n + k] -= f * a[c * n + k];
        inv[r * n + k] -= f * inv[c * n + k];
      }
    }
  }
  return Matrix(Unchecked{}, n, std::move(inv));
}

Matrix Matrix::transpose() const {
  std::size_t n = dim_;
  std::vector<Rational> t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[j * n + i] = entries_[i * n + j];
  return Matrix(Unchecked{}, n, std::move(t));
}

Matrix Matrix::pow(long n) const {
  Matrix base = n < 0 ? inverse() : *this;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  Matrix result = identity(dim_);
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Matrix Matrix::conjugated_by(const Matrix& h) const { return h * *this * h.inverse(); }

Rational Matrix::determinant() const { return pingcert::determinant(entries_, dim_); }

Rational Matrix::trace() const {
  Rational t = 0;
  for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
  return t;
}

Vector Matrix::apply(std::span<const Rational> x) const {
  if (x.size() != dim_) throw InvalidInput("vector dimension mismatch");
  Vector y(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) y[i] += entries_[i * dim_ + j] * x[j];
  return y;
}

Vector Matrix::apply_left(std::span<const Rational> x) const {
  if (x.size() != dim_) throw InvalidInput("vector dimension mismatch");
  Vector y(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) y[j] += x[i] * entries_[i * dim_ + j];
  return y;
}

bool Matrix::is_identity() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (entries_[i * dim_ + j] != (i == j ? 1 : 0)) return false;
  return true;
}

bool Matrix::is_integral() const {
  for (const auto& e : entries_)
    if (e.get_den() != 1) return false;
  return true;
}

std::string Matrix::canonical() const {
  std::string s;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (k) s += ',';
    s += format_rational(entries_[k]);
  }
  return s;
}

namespace {

std::size_t hash_mpz(mpz_srcptr z, std::size_t seed) {
  std::size_t n = mpz_size(z);
  seed ^= std::hash<long>{}(static_cast<long>(mpz_sgn(z))) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  for (std::size_t i = 0; i < n; ++i)
    seed ^= std::hash<mp_limb_t>{}(mpz_getlimbn(z, static_cast<mp_size_t>(i))) + 0x9e3779b97f4a7c15ULL + (seed << 6) +
            (seed >> 2);
  return seed;
}

}  // namespace

std::size_t Matrix::hash() const {
  std::size_t h = dim_;
  for (const auto& e : entries_) {
    h = hash_mpz(e.get_num_mpz_t(), h);
    h = hash_mpz(e.get_den_mpz_t(), h);
  }
  return h;
}

std::vector<std::vector<std::string>> Matrix::to_strings() const {
  std::vector<std::vector<std::string>> rows(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) rows[i].push_back(format_rational(entries_[i * dim_ + j]));
  return rows;
}

Polynomial char_poly(const Matrix& m) {
  // Reduce to upper Hessenberg form by similarity, then use the
  // Hessenberg determinant recurrence.
  std::size_t n = m.dim();
  std::vector<Rational> h(m.entries().begin(), m.entries().end());
  auto at = [&](std::size_t i, std::size_t j) -> Rational& { return h[i * n + j]; };
  for (std::size_t c = 0; c + 2 <= n; ++c) {
    std::size_t pivot = c + 1;
    while (pivot < n && at(pivot, c) == 0) ++pivot;
    if (pivot == n) continue;
    if (pivot != c + 1) {
      for (std::size_t k = 0; k < n; ++k) std::swap(at(pivot, k), at(c + 1, k));
      for (std::size_t k = 0; k < n; ++k) std::swap(at(k, pivot), at(k, c + 1));
    }
    Rational p = at(c + 1, c);
    for (std::size_t r = c + 2; r < n; ++r) {
      if (at(r, c) == 0) continue;
      Rational f = at(r, c) / p;
      for (std::size_t k = 0; k < n; ++k) at(r, k) -= f * at(c + 1, k);
      for (std::size_t k = 0; k < n; ++k) at(k, c + 1) += f * at(k, r);
    }
  }
  // p_k = char poly of the leading k x k block.
  std::vector<Polynomial> p(n + 1);
  p[0] = Polynomial::constant(1);
  Polynomial x = Polynomial::monomial(1, 1);
  for (std::size_t k = 1; k <= n; ++k) {
    Polynomial acc = (x - Polynomial::constant(at(k - 1, k - 1))) * p[k - 1];
    Rational t = 1;
    for (std::size_t i = 1; i < k; ++i) {
      t *= at(k - i, k - i - 1);
      acc = acc - Polynomial::constant(t * at(k - i - 1, k - 1)) * p[k - i - 1];
    }
    p[k] = std::move(acc);
  }
  return p[n];
}

Polynomial minimal_polynomial(const Matrix& m) {
  // lcm over basis vectors of the minimal polynomial of the Krylov sequence.
  std::size_t n = m.dim();
  Polynomial result = Polynomial::constant(1);
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<Vector> krylov;
    Vector v(n);
    v[b] = 1;
    // Reduced echelon data to detect the first dependency.
    std::vector<Vector> basis;            // echelon rows
    std::vector<std::vector<Rational>> combo;  // row as combination of krylov vectors
    std::vector<std::size_t> pivots;
    Polynomial local;
    for (std::size_t k = 0; k <= n; ++k) {
      Vector w = v;
      std::vector<Rational> c(k + 1);
      c[k] = 1;
      for (std::size_t r = 0; r < basis.size(); ++r) {
        Rational f = w[pivots[r]];
        if (f == 0) continue;
        for (std::size_t j = 0; j < n; ++j) w[j] -= f * basis[r][j];
        for (std::size_t j = 0; j < combo[r].size(); ++j) c[j] -= f * combo[r][j];
      }
      std::size_t piv = 0;
      while (piv < n && w[piv] == 0) ++piv;
      if (piv == n) {
        local = Polynomial(c);
        break;
      }
      Rational inv = 1 / w[piv];
      for (auto& x : w) x *= inv;
      for (auto& x : c) x *= inv;
      basis.push_back(std::move(w));
      combo.push_back(std::move(c));
      pivots.push_back(piv);
      v = m.apply(v);
    }
    local = local.monic();
    // lcm(result, local)
    Polynomial g = gcd(result, local);
    result = (divmod(result, g).first * local).monic();
  }
  return result;
}

std::vector<std::vector<std::size_t>> wedge_basis(std::size_t d, std::size_t i) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == i) {
      out.push_back(cur);
      return;
    }
    for (std::size_t k = start; k < d; ++k) {
      cur.push_back(k);
      rec(k + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

Matrix wedge_power(const Matrix& m, std::size_t i) {
  std::size_t d = m.dim();
  if (i < 1 || i > d) throw InvalidInput("wedge power index out of range");
  auto basis = wedge_basis(d, i);
  std::size_t N = basis.size();
  std::vector<Rational> e(N * N);
  std::vector<Rational> minor(i * i);
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) {
      for (std::size_t a = 0; a < i; ++a)
        for (std::size_t b = 0; b < i; ++b) minor[a * i + b] = m(basis[r][a], basis[c][b]);
      e[r * N + c] = determinant(minor, i);
    }
  return Matrix(N, std::move(e));
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational norm_sq(std::span<const Rational> a) { return dot(a, a); }

}  // namespace pingcert
