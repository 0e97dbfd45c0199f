#include "pingcert/polynomial.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "pingcert/errors.hpp"

namespace pingcert {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(const Rational& c, std::size_t degree) {
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::linear_factor(const Rational& root) { return Polynomial({-root, Rational(1)}); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

const Rational& Polynomial::leading() const {
  if (coeffs_.empty()) throw InvalidInput("leading coefficient of the zero polynomial");
  return coeffs_.back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

int Polynomial::sign_at(const Rational& x) const {
  for (const auto& c : coeffs_)
    if (c.get_den() != 1) return sgn((*this)(x));
  if (coeffs_.empty()) return 0;
  // Integer coefficients: sign of q^n p(a/q), all in integers.
  const Integer& a = x.get_num();
  const Integer& q = x.get_den();
  Integer acc = coeffs_.back().get_num(), qpow = 1;
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
    qpow *= q;
    acc = acc * a + coeffs_[k].get_num() * qpow;
  }
  return sgn(acc);
}

Polynomial Polynomial::primitive() const {
  if (coeffs_.empty()) return {};
  Integer l = 1, g = 0;
  for (const auto& c : coeffs_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Rational> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) {
    Integer v = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    out.emplace_back(v);
  }
  if (sgn(coeffs_.back()) < 0) g = -g;
  for (auto& c : out) c = Rational(c.get_num() / g);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<unsigned long>(k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  Rational lc = leading();
  std::vector<Rational> v(coeffs_);
  for (auto& c : v) c /= lc;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::reflected() const {
  std::vector<Rational> v(coeffs_);
  for (std::size_t k = 1; k < v.size(); k += 2) v[k] = -v[k];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::squarefree_part() const {
  if (degree() <= 0) return monic();
  Polynomial g = gcd(*this, derivative());
  return divmod(*this, g).first.monic();
}

std::vector<std::pair<Polynomial, int>> Polynomial::squarefree_factorization() const {
  std::vector<std::pair<Polynomial, int>> out;
  if (degree() <= 0) return out;
  Polynomial f = monic();
  Polynomial df = f.derivative();
  Polynomial a = gcd(f, df);
  Polynomial b = divmod(f, a).first;
  Polynomial c = divmod(df, a).first;
  Polynomial d = c - b.derivative();
  for (int k = 1; b.degree() > 0; ++k) {
    Polynomial g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, k);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coeffs_[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Rational a = abs(c);
    if (a != 1 || k == 0) os << format_rational(a);
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.coefficient(k) + b.coefficient(k);
  return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& p) {
  std::vector<Rational> v(p.coeffs_);
  for (auto& c : v) c = -c;
  return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(v));
}

Polynomial operator*(const Rational& c, const Polynomial& p) {
  std::vector<Rational> v(p.coeffs_);
  for (auto& x : v) x *= c;
  return Polynomial(std::move(v));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw InvalidInput("polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial{}, a};
  std::vector<Rational> r(a.coefficients());
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - b.degree() + 1));
  const auto& bc = b.coefficients();
  const Rational& lc = b.leading();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    std::size_t top = static_cast<std::size_t>(k + b.degree());
    Rational f = r[top] / lc;
    q[static_cast<std::size_t>(k)] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) r[static_cast<std::size_t>(k) + j] -= f * bc[j];
  }
  r.resize(static_cast<std::size_t>(b.degree()));
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  // Primitive remainders keep coefficient sizes down.
  Polynomial x = a.primitive(), y = b.primitive();
  while (!y.is_zero()) {
    Polynomial r = divmod(x, y).second;
    x = std::move(y);
    y = r.primitive();
  }
  return x.monic();
}

bool divides(const Polynomial& d, const Polynomial& p) { return divmod(p, d).second.is_zero(); }

SturmSequence::SturmSequence(const Polynomial& squarefree) {
  if (squarefree.is_zero()) throw InvalidInput("Sturm sequence of the zero polynomial");
  // Scaling by positive constants keeps sign patterns and tames coefficient growth.
  auto normalize = [](const Polynomial& p) { return sgn(p.leading()) > 0 ? p.primitive() : -p.primitive(); };
  chain_.push_back(normalize(squarefree));
  if (squarefree.degree() == 0) return;
  chain_.push_back(normalize(squarefree.derivative()));
  while (chain_.back().degree() > 0) {
    Polynomial r = divmod(chain_[chain_.size() - 2], chain_.back()).second;
    if (r.is_zero()) break;
    chain_.push_back(normalize(-r));
  }
}

namespace {

int count_variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace

int SturmSequence::variations_at(const Rational& x) const {
  std::vector<int> s;
  s.reserve(chain_.size());
  for (const auto& p : chain_) s.push_back(p.sign_at(x));
  return count_variations(s);
}

int SturmSequence::variations_at_infinity(bool positive) const {
  std::vector<int> s;
  s.reserve(chain_.size());
  for (const auto& p : chain_) {
    int lc = sgn(p.leading());
    s.push_back((positive || p.degree() % 2 == 0) ? lc : -lc);
  }
  return count_variations(s);
}

int SturmSequence::count(const Rational& a, const Rational& b) const {
  if (b <= a) return 0;
  return variations_at(a) - variations_at(b);
}

int SturmSequence::count_above(const Rational& a) const { return variations_at(a) - variations_at_infinity(true); }

int SturmSequence::total() const { return variations_at_infinity(false) - variations_at_infinity(true); }

Rational root_bound(const Polynomial& p) {
  // Fujiwara: |z| <= 2 max_k |a_{n-k}/a_n|^(1/k), rounded up to powers of two.
  if (p.degree() <= 0) return 1;
  int n = p.degree();
  const Rational& lc = p.leading();
  long e = 0;
  for (int k = 1; k <= n; ++k) {
    Rational c = abs(p.coefficient(static_cast<std::size_t>(n - k)) / lc);
    if (c == 0) continue;
    long l = approx_log2(c) + 1;  // c < 2^l
    long q = l >= 0 ? (l + k - 1) / k : -((-l) / k);
    e = std::max(e, q);
  }
  Rational b = 1;
  mpq_mul_2exp(b.get_mpq_t(), b.get_mpq_t(), static_cast<mp_bitcnt_t>(e + 2));
  return b;
}

int count_roots_above(const Polynomial& p, const Rational& x) {
  int n = 0;
  for (const auto& [f, k] : p.squarefree_factorization()) n += k * SturmSequence(f).count_above(x);
  return n;
}

int count_roots_at_least(const Polynomial& p, const Rational& x) {
  int n = 0;
  for (const auto& [f, k] : p.squarefree_factorization()) {
    n += k * SturmSequence(f).count_above(x);
    if (f(x) == 0) n += k;
  }
  return n;
}

std::vector<Rational> power_sums(const Polynomial& p, std::size_t count) {
  Polynomial m = p.monic();
  std::size_t n = static_cast<std::size_t>(m.degree());
  // a[j] = coefficient of x^(n-j)
  std::vector<Rational> a(n + 1);
  for (std::size_t j = 0; j <= n; ++j) a[j] = m.coefficient(n - j);
  std::vector<Rational> s(count + 1);
  for (std::size_t k = 1; k <= count; ++k) {
    Rational acc = 0;
    for (std::size_t j = 1; j < k && j <= n; ++j) acc += a[j] * s[k - j];
    if (k <= n) acc += a[k] * static_cast<unsigned long>(k);
    s[k] = -acc;
  }
  s.erase(s.begin());
  return s;
}

Polynomial from_power_sums(std::span<const Rational> sums, std::size_t degree) {
  if (sums.size() < degree) throw InvalidInput("not enough power sums");
  std::vector<Rational> a(degree + 1);
  a[0] = 1;
  for (std::size_t k = 1; k <= degree; ++k) {
    Rational acc = sums[k - 1];
    for (std::size_t j = 1; j < k; ++j) acc += a[j] * sums[k - j - 1];
    a[k] = -acc / static_cast<unsigned long>(k);
  }
  std::vector<Rational> c(degree + 1);
  for (std::size_t j = 0; j <= degree; ++j) c[degree - j] = a[j];
  return Polynomial(std::move(c));
}

namespace {

Rational binomial(std::size_t n, std::size_t k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

// e_i of a multiset given its power sums P_1..P_i.
Rational elementary_from_power_sums(const std::vector<Rational>& P, std::size_t i) {
  std::vector<Rational> e(i + 1);
  e[0] = 1;
  for (std::size_t m = 1; m <= i; ++m) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      Rational t = e[m - j] * P[j - 1];
      if (j % 2 == 1) acc += t;
      else acc -= t;
    }
    e[m] = acc / static_cast<unsigned long>(m);
  }
  return e[i];
}

}  // namespace

Polynomial wedge_polynomial(const Polynomial& charpoly, std::size_t i) {
  std::size_t d = static_cast<std::size_t>(charpoly.degree());
  if (i > d) throw InvalidInput("wedge index exceeds degree");
  std::size_t N = static_cast<std::size_t>(binomial(d, i).get_num().get_ui());
  if (i == 0) return Polynomial::linear_factor(1);
  std::vector<Rational> s = power_sums(charpoly, i * N);
  std::vector<Rational> t(N);
  for (std::size_t k = 1; k <= N; ++k) {
    std::vector<Rational> P(i);
    for (std::size_t m = 1; m <= i; ++m) P[m - 1] = s[m * k - 1];
    t[k - 1] = elementary_from_power_sums(P, i);
  }
  return from_power_sums(t, N);
}

Polynomial squared_products_polynomial(const Polynomial& charpoly) {
  std::size_t d = static_cast<std::size_t>(charpoly.degree());
  std::size_t N = d * (d + 1) / 2;
  std::vector<Rational> s = power_sums(charpoly, 4 * N);
  std::vector<Rational> u(N);
  for (std::size_t m = 1; m <= N; ++m) u[m - 1] = (s[2 * m - 1] * s[2 * m - 1] + s[4 * m - 1]) / 2;
  return from_power_sums(u, N);
}

unsigned euler_phi(unsigned n) {
  unsigned result = n;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

Polynomial cyclotomic(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, Polynomial> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  Polynomial p = Polynomial::monomial(1, n) - Polynomial::constant(1);
  for (unsigned d = 1; d < n; ++d) {
    if (n % d) continue;
    Polynomial phi_d;
    if (auto it = cache.find(d); it != cache.end()) phi_d = it->second;
    else {
      // compute without holding recursion on the lock
      Polynomial q = Polynomial::monomial(1, d) - Polynomial::constant(1);
      for (unsigned e = 1; e < d; ++e)
        if (d % e == 0) q = divmod(q, cache.at(e)).first;
      cache.emplace(d, q);
      phi_d = q;
    }
    p = divmod(p, phi_d).first;
  }
  cache.emplace(n, p);
  return p;
}

}  // namespace pingcert
