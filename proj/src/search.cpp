#include "pingcert/search.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "pingcert/errors.hpp"
#include "pingcert/spectral.hpp"

namespace pingcert {

namespace {

const Rational kNormTolerance(1, 1 << 20);

std::string interval_text(const RationalInterval& x) {
  RationalInterval r = x.rounded(32);
  return "[" + format_rational(r.lo) + "," + format_rational(r.hi) + "]";
}

std::string quoted(const std::string& s) {
  if (s.find(' ') == std::string::npos) return s;
  return "\"" + s + "\"";
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  std::size_t d = m.dim();
  Eigen::MatrixXd e(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) e(i, j) = to_double(m(i, j));
  return e;
}

Rational near_rational(double x, double tol) { return simplest_between(Rational(x - tol), Rational(x + tol)); }

RationalInterval max_norm(const GeneratorSet& s) {
  RationalInterval best(Rational(0));
  for (const auto& g : s.matrices()) {
    RationalInterval n = operator_norm_bounds(g, kNormTolerance).op_norm;
    if (n.lo > best.lo) best.lo = n.lo;
    if (n.hi > best.hi) best.hi = n.hi;
  }
  return best;
}

// Breadth-first layers of positive words: layer k holds the elements first
// reached with k letters, each with its shortlex-least word, in shortlex order.
class WordLayers {
 public:
  struct Node {
    std::vector<Letter> letters;
    Matrix value;
  };

  WordLayers(GeneratorSetPtr s, std::size_t node_cap, bool parallel)
      : s_(std::move(s)), cap_(node_cap), parallel_(parallel) {
    Matrix e = Matrix::identity(s_->dim());
    seen_.insert(e);
    current_.push_back({{}, e});
    for (std::size_t g = 0; g < s_->size(); ++g)
      if (!(*s_)[g].is_identity()) letters_.push_back(g);
  }

  int depth() const { return depth_; }
  const std::vector<Node>& current() const { return current_; }

  // Advances one layer; returns false once no new elements appear.
  bool next() {
    std::size_t count = current_.size() * letters_.size();
    std::vector<std::optional<Matrix>> products(count);
#pragma omp parallel for schedule(dynamic, 64) if (parallel_)
    for (std::size_t k = 0; k < count; ++k)
      products[k] = current_[k / letters_.size()].value * (*s_)[letters_[k % letters_.size()]];
    std::vector<Node> layer;
    for (std::size_t k = 0; k < count; ++k) {
      if (!seen_.insert(*products[k]).second) continue;
      if (seen_.size() > cap_) throw BudgetExceeded("word enumeration node cap exceeded", depth_);
      Node n{current_[k / letters_.size()].letters, std::move(*products[k])};
      n.letters.push_back({letters_[k % letters_.size()], false});
      layer.push_back(std::move(n));
    }
    current_ = std::move(layer);
    ++depth_;
    return !current_.empty();
  }

  Word word(const Node& n) const { return Word(s_, n.letters); }

 private:
  GeneratorSetPtr s_;
  std::size_t cap_;
  bool parallel_;
  std::vector<std::size_t> letters_;
  std::unordered_set<Matrix, MatrixHash> seen_;
  std::vector<Node> current_;
  int depth_ = 0;
};

// 0 when the predicate fails, otherwise the power j that satisfied it.
int evaluate(const EscapePredicate& p, const Matrix& g) {
  switch (p.kind) {
    case EscapePredicate::Kind::nonidentity:
      return g.is_identity() ? 0 : 1;
    case EscapePredicate::Kind::semisimple_infinite_order: {
      ElementClass c = classify_element(g);
      return !c.torsion && c.semisimple ? 1 : 0;
    }
    case EscapePredicate::Kind::moves_point: {
      Matrix m = p.rep ? p.rep->apply(g) : g;
      return image(m, p.v) == p.v ? 0 : 1;
    }
    case EscapePredicate::Kind::moves_point_off_hyperplane: {
      Matrix m = p.rep ? p.rep->apply(g) : g;
      ProjPoint x = p.v;
      for (int j = 1; j <= p.j_max; ++j) {
        x = image(m, x);
        if (point_hyperplane_distance_sq(x, p.H) >= p.epsilon * p.epsilon) return j;
      }
      return 0;
    }
  }
  return 0;
}

// Gradient descent of f(h) = sum ||h M h^-1||_F^2 over h = exp(X), X
// symmetric. The gradient at h = I is sum (M M^T - M^T M).
Eigen::MatrixXd descent(std::vector<Eigen::MatrixXd> ms) {
  std::size_t d = ms.front().rows();
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d);
  auto energy = [](const std::vector<Eigen::MatrixXd>& v) {
    double s = 0;
    for (const auto& m : v) s += m.squaredNorm();
    return s;
  };
  double f = energy(ms);
  double step = 1.0 / f;
  for (int it = 0; it < 5000; ++it) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    for (const auto& m : ms) g += m * m.transpose() - m.transpose() * m;
    double gn = g.squaredNorm();
    if (std::sqrt(gn) <= 1e-14 * f) break;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    bool moved = false;
    while (step > 1e-300) {
      Eigen::VectorXd ev = es.eigenvalues();
      Eigen::MatrixXd e = es.eigenvectors() * (-step * ev.array()).exp().matrix().asDiagonal() *
                          es.eigenvectors().transpose();
      Eigen::MatrixXd einv = es.eigenvectors() * (step * ev.array()).exp().matrix().asDiagonal() *
                             es.eigenvectors().transpose();
      std::vector<Eigen::MatrixXd> next;
      for (const auto& m : ms) next.push_back(e * m * einv);
      double fn = energy(next);
      if (fn <= f - 1e-4 * step * gn) {
        ms = std::move(next);
        h = e * h;
        f = fn;
        step *= 2;
        moved = true;
        break;
      }
      step /= 2;
    }
    if (!moved) break;
  }
  return h;
}

Matrix rationalize_conjugator(const Eigen::MatrixXd& h) {
  std::size_t d = h.rows();
  double scale = h.cwiseAbs().maxCoeff();
  std::vector<Rational> entries;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) entries.push_back(near_rational(h(i, j) / scale, 1e-13));
  return Matrix(d, std::move(entries));
}

struct ReducedConjugator {
  Matrix h;
  RationalInterval norm;
};

// Repeated rounds of descent from the current exact conjugate: each round
// starts from exactly computed matrices, so rounding errors do not pile up.
ReducedConjugator reduce_rounds(const GeneratorSet& s, const RationalInterval& initial) {
  Matrix h = Matrix::identity(s.dim());
  RationalInterval best = initial;
  for (int round = 0; round < 4; ++round) {
    GeneratorSet cur = s.conjugated(h);
    std::vector<Eigen::MatrixXd> ms;
    for (const auto& g : cur.matrices()) ms.push_back(to_eigen(g));
    Eigen::MatrixXd step = descent(ms);
    double shift = (step / std::pow(std::abs(step.determinant()), 1.0 / static_cast<double>(s.dim())) -
                    Eigen::MatrixXd::Identity(s.dim(), s.dim()))
                       .norm();
    if (shift < 1e-12) break;
    Matrix hs(Matrix::identity(s.dim()));
    try {
      hs = rationalize_conjugator(step);
    } catch (const InvalidInput&) {
      break;
    }
    Matrix cand = hs * h;
    RationalInterval n = max_norm(s.conjugated(cand));
    if (n.hi > best.hi) break;
    h = cand;
    best = n;
  }
  return {h, best};
}

// LLL reduction (delta = 0.99) of the columns of b; returns the unimodular
// column transformation.
std::vector<std::vector<long long>> lll(Eigen::MatrixXd b) {
  std::size_t d = b.cols();
  std::vector<std::vector<long long>> u(d, std::vector<long long>(d, 0));
  for (std::size_t i = 0; i < d; ++i) u[i][i] = 1;
  auto column_op = [&](std::size_t k, std::size_t j, long long q) {
    b.col(k) -= static_cast<double>(q) * b.col(j);
    for (std::size_t i = 0; i < d; ++i) u[i][k] -= q * u[i][j];
  };
  auto swap_cols = [&](std::size_t k) {
    b.col(k).swap(b.col(k - 1));
    for (std::size_t i = 0; i < d; ++i) std::swap(u[i][k], u[i][k - 1]);
  };
  std::size_t k = 1;
  for (int guard = 0; k < d && guard < 100000; ++guard) {
    Eigen::MatrixXd q = b;
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        mu(i, j) = b.col(i).dot(q.col(j)) / q.col(j).squaredNorm();
        q.col(i) -= mu(i, j) * q.col(j);
      }
    bool changed = false;
    for (std::size_t j = k; j-- > 0;) {
      long long r = std::llround(mu(k, j));
      if (r != 0) {
        column_op(k, j, r);
        for (std::size_t t = 0; t <= j; ++t) mu(k, t) -= static_cast<double>(r) * (t == j ? 1.0 : mu(j, t));
        changed = true;
      }
    }
    (void)changed;
    double lhs = q.col(k).squaredNorm() + mu(k, k - 1) * mu(k, k - 1) * q.col(k - 1).squaredNorm();
    if (lhs >= 0.99 * q.col(k - 1).squaredNorm()) {
      ++k;
    } else {
      swap_cols(k);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return u;
}

// Arithmetic in Q(sqrt D).
struct Q2 {
  Rational a, b;
};
Q2 add(const Q2& x, const Q2& y) { return {x.a + y.a, x.b + y.b}; }
Q2 sub(const Q2& x, const Q2& y) { return {x.a - y.a, x.b - y.b}; }
Q2 mul(const Q2& x, const Q2& y, const Rational& D) { return {x.a * y.a + D * x.b * y.b, x.a * y.b + x.b * y.a}; }
Q2 div(const Q2& x, const Q2& y, const Rational& D) {
  Rational n = y.a * y.a - D * y.b * y.b;
  return mul(x, {y.a / n, -y.b / n}, D);
}
bool is_zero(const Q2& x) { return x.a == 0 && x.b == 0; }
// Sign of a + b sqrt(D), D > 0 not a square.
int sign_of(const Q2& x, const Rational& D) {
  int sa = sgn(x.a), sb = sgn(x.b);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  Rational l = x.a * x.a, r = x.b * x.b * D;
  return l > r ? sa : (l < r ? sb : 0);
}

Q2 determinant_q2(std::vector<std::vector<Q2>> cols, const Rational& D) {
  std::size_t n = cols.size();
  Q2 det{1, 0};
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(cols[p][c])) ++p;
    if (p == n) return {0, 0};
    if (p != c) {
      std::swap(cols[p], cols[c]);
      det = {-det.a, -det.b};
    }
    det = mul(det, cols[c][c], D);
    for (std::size_t r = c + 1; r < n; ++r) {
      Q2 f = div(cols[r][c], cols[c][c], D);
      for (std::size_t k = c; k < n; ++k) cols[r][k] = sub(cols[r][k], mul(f, cols[c][k], D));
    }
  }
  return det;
}

}  // namespace

// ---------------------------------------------------------------- trace

Trace::Field::Field(std::string k, const Rational& v) : key(std::move(k)), value(format_rational(v)) {}
Trace::Field::Field(std::string k, const RationalInterval& v) : key(std::move(k)), value(interval_text(v)) {}

void Trace::add(const std::string& step, const std::vector<Field>& fields) {
  std::string line = step;
  for (const auto& f : fields) line += " " + f.key + "=" + quoted(f.value);
  lines_.push_back(std::move(line));
}

std::string Trace::str() const {
  std::string out;
  for (const auto& l : lines_) out += l + "\n";
  return out;
}

// ---------------------------------------------------------------- escape

EscapePredicate EscapePredicate::nonidentity() { return {}; }

EscapePredicate EscapePredicate::semisimple_infinite_order() {
  EscapePredicate p;
  p.kind = Kind::semisimple_infinite_order;
  return p;
}

EscapePredicate EscapePredicate::moves_point(ProjPoint v, std::optional<Representation> rep) {
  EscapePredicate p;
  p.kind = Kind::moves_point;
  p.v = std::move(v);
  p.rep = std::move(rep);
  return p;
}

EscapePredicate EscapePredicate::moves_point_off_hyperplane(ProjPoint v, ProjHyperplane H, int j_max,
                                                            Rational epsilon, std::optional<Representation> rep) {
  EscapePredicate p;
  p.kind = Kind::moves_point_off_hyperplane;
  p.v = std::move(v);
  p.H = std::move(H);
  p.j_max = j_max;
  p.epsilon = std::move(epsilon);
  p.rep = std::move(rep);
  return p;
}

std::string EscapePredicate::name() const {
  switch (kind) {
    case Kind::nonidentity: return "nonidentity";
    case Kind::semisimple_infinite_order: return "semisimple_infinite_order";
    case Kind::moves_point: return "moves_point";
    case Kind::moves_point_off_hyperplane: return "moves_point_off_hyperplane";
  }
  return "";
}

EscapeResult escape_search(const GeneratorSetPtr& s, const EscapePredicate& predicate, int k_max,
                           std::size_t node_cap, bool parallel) {
  if (k_max < 1) throw InvalidInput("k_max must be at least 1");
  if (predicate.kind == EscapePredicate::Kind::moves_point_off_hyperplane && predicate.j_max < 1)
    throw InvalidInput("j_max must be at least 1");
  WordLayers layers(s, node_cap, parallel);
  while (layers.depth() < k_max && layers.next()) {
    const auto& nodes = layers.current();
    std::vector<int> hit(nodes.size(), 0);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (std::size_t i = 0; i < nodes.size(); ++i) hit[i] = evaluate(predicate, nodes[i].value);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (hit[i]) return {layers.word(nodes[i]), layers.depth(), hit[i]};
  }
  throw NotFound("no element of Sigma^" + std::to_string(k_max) + " satisfies " + predicate.name());
}

// ---------------------------------------------------------------- conjugation

ConjugationResult conjugation_reduce(const GeneratorSet& s) {
  RationalInterval initial = max_norm(s);
  ReducedConjugator r = reduce_rounds(s, initial);
  return {r.h, s.conjugated(r.h), r.norm, initial};
}

IntegralConjugationResult integral_conjugation_reduce(const GeneratorSet& s) {
  for (const auto& g : s.matrices())
    if (!g.is_integral() || g.determinant() != 1) throw InvalidInput("integral conjugation needs SL_d(Z) input");
  std::size_t d = s.dim();
  RationalInterval initial = max_norm(s);
  IntegralConjugationResult out{Matrix::identity(d), s, initial, initial};
  ReducedConjugator real = reduce_rounds(s, initial);
  if (real.h.is_identity()) return out;
  auto u = lll(to_eigen(real.h));
  std::vector<Rational> entries;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) entries.push_back(Rational(static_cast<long>(u[i][j])));
  Matrix um(d, entries);
  if (um.determinant() < 0) {
    for (std::size_t i = 0; i < d; ++i) entries[i * d] = -entries[i * d];
    um = Matrix(d, entries);
  }
  Matrix gamma = um.inverse();
  if (gamma.is_identity()) return out;
  GeneratorSet reduced = s.conjugated(gamma);
  RationalInterval n = max_norm(reduced);
  if (n.hi <= initial.hi) out = {gamma, reduced, n, initial};
  return out;
}

// ---------------------------------------------------------------- quasi-diagonalization

QuasiDiagonalization quasi_diagonalize(const Matrix& a, const Rational& tolerance) {
  std::size_t d = a.dim();
  if (d < 2) throw InvalidInput("quasi_diagonalize needs d >= 2");
  ModulusBounds mb = eigen_modulus_bounds(a, tolerance);
  for (int k = 0; k < 4 && mb.lambda_max.lo < 2 * mb.lambda_second.hi; ++k)
    mb = eigen_modulus_bounds(a, tolerance / power(Rational(1 << 16), k + 1));
  if (mb.lambda_max.lo < 2 * mb.lambda_second.hi) throw InvalidInput("precondition Lambda(A) >= 2 lambda(A) fails");
  Polynomial chi = char_poly(a);
  const RationalInterval& L = mb.lambda_max;
  bool positive = count_roots_at_least(chi, L.lo) - count_roots_above(chi, L.hi) > 0;
  RationalInterval lambda1 = positive ? L : RationalInterval(-L.hi, -L.lo);

  Eigen::MatrixXd ae = to_eigen(a);
  double target = to_double(lambda1.midpoint());
  auto eigvec = [&](const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i) - target) < std::abs(es.eigenvalues()(best) - target)) best = i;
    Eigen::VectorXd v = es.eigenvectors().col(best).real();
    double scale = v.cwiseAbs().maxCoeff();
    Vector out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = near_rational(v(i) / scale, 1e-13);
    return out;
  };
  Vector u = eigvec(ae), l = eigvec(ae.transpose());
  std::size_t k = 0;
  for (std::size_t i = 1; i < d; ++i)
    if (abs(l[i]) > abs(l[k])) k = i;
  // Columns: u, then a basis of the hyperplane l^perp.
  std::vector<Vector> cols{u};
  for (std::size_t j = 0; j < d; ++j) {
    if (j == k) continue;
    Vector c(d, Rational(0));
    c[j] = 1;
    c[k] = -l[j] / l[k];
    cols.push_back(c);
  }
  std::vector<Rational> p(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) p[i * d + j] = cols[j][i];
  Matrix pm(d, p);
  Matrix h = pm.inverse();
  Matrix ap = a.conjugated_by(h);
  Rational defect = 0;
  for (std::size_t i = 1; i < d; ++i) {
    if (abs(ap(i, 0)) > defect) defect = abs(ap(i, 0));
    if (abs(ap(0, i)) > defect) defect = abs(ap(0, i));
  }
  Rational bound = power(Rational(3), d) * power(operator_norm_bounds(a, kNormTolerance).op_norm.lo, d * d);
  bool check = op_norm_upper(h, kNormTolerance) <= bound;
  return {h, ap, lambda1, defect, check};
}

// ---------------------------------------------------------------- wedge power

WedgeChoice select_wedge_power(const Matrix& a) {
  std::size_t d = a.dim();
  if (d < 2) throw InvalidInput("select_wedge_power needs d >= 2");
  if (count_roots_above(squared_products_polynomial(char_poly(a)), Rational(1)) == 0)
    throw InvalidInput("precondition Lambda(A) > 1 fails");
  for (unsigned long bits = 20; bits <= 200; bits += 30) {
    Rational tol = power(Rational(1, 2), bits);
    auto p = modulus_products(a, tol);
    std::vector<RationalInterval> ratio(d);
    for (std::size_t i = 1; i < d; ++i) ratio[i] = (p[i] * p[i]) / (p[i - 1] * p[i + 1]);
    Rational top = ratio[1].lo;
    for (std::size_t i = 2; i < d; ++i)
      if (ratio[i].lo > top) top = ratio[i].lo;
    // Smallest i not provably below the maximum; with exact ties this is the
    // smallest maximizer.
    std::size_t choice = 0, contenders = 0;
    for (std::size_t i = 1; i < d; ++i)
      if (ratio[i].hi >= top) {
        if (!choice) choice = i;
        ++contenders;
      }
    bool settled = contenders == 1 || bits + 30 > 200;
    if (!settled) continue;
    if (pow(RationalInterval(ratio[choice].lo), d * d).lo >= p[1].hi) return {choice, ratio[choice], p[1]};
  }
  throw Undecided("wedge gap ratio^(d^2) >= Lambda(A) not provable at precision");
}

// ---------------------------------------------------------------- separation

SeparationBound separation_lower_bound(const Matrix& B, const QuadraticBasis& basis, const Rational& M) {
  std::size_t d = B.dim();
  if (!B.is_integral()) throw InvalidInput("B must be integral");
  if (basis.vectors.size() != d) throw InvalidInput("basis needs d vectors");
  for (const auto& v : basis.vectors)
    if (v.size() != d) throw InvalidInput("basis vector dimension mismatch");
  bool quadratic = false;
  for (const auto& v : basis.vectors)
    for (const auto& x : v)
      if (x.b != 0) quadratic = true;
  Rational D(basis.D);
  if (quadratic) {
    if (basis.D <= 1) throw InvalidInput("unsupported: field parameter D must be a positive non-square");
    Integer s = sqrt(basis.D);
    if (s * s == basis.D) throw InvalidInput("unsupported: field parameter D must be a positive non-square");
  }
  for (const auto& v : basis.vectors)
    for (const auto& x : v) {
      bool integral = quadratic ? (Rational(2 * x.a).get_den() == 1 &&
                                   Rational(x.a * x.a - D * x.b * x.b).get_den() == 1)
                                : x.a.get_den() == 1;
      if (!integral) throw InvalidInput("basis entries must be algebraic integers");
    }
  for (const auto& v : basis.vectors) {
    Rational x = 0, y = 0;
    for (const auto& c : v) {
      x += c.a * c.a + D * c.b * c.b;
      y += 2 * c.a * c.b;
    }
    // Both embeddings: x + y sqrt(D) and x - y sqrt(D).
    if (sign_of({M * M - x, -y}, D) < 0 || sign_of({M * M - x, y}, D) < 0)
      throw InvalidInput("M must bound every conjugate norm");
  }
  std::vector<std::vector<Q2>> cols;
  for (const auto& v : basis.vectors) {
    std::vector<Q2> c;
    for (const auto& x : v) c.push_back({x.a, x.b});
    cols.push_back(c);
  }
  if (is_zero(determinant_q2(cols, D))) throw InvalidInput("basis vectors must be independent");
  std::vector<Q2> bu(d, Q2{0, 0});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) bu[i] = add(bu[i], mul({B(i, j), 0}, cols[0][j], D));
  cols[0] = bu;
  SeparationBound out;
  out.degree = quadratic ? 2 : 1;
  if (is_zero(determinant_q2(cols, D))) {
    out.member = true;
    return out;
  }
  unsigned long e = 1;
  for (std::size_t k = 0; k < d; ++k) e *= static_cast<unsigned long>(out.degree);
  Rational nb = op_norm_upper(B, kNormTolerance);
  out.bound = 1 / (power(nb, e) * power(M, 2 * d * e));
  return out;
}

// ---------------------------------------------------------------- pipelines

namespace {

struct Prefix {
  std::string failure;
  Word alpha;
  Representation rep;
};

std::string tf(bool b) { return b ? "true" : "false"; }

// Steps shared by both pipelines: escape, alpha, conjugation, wedge power.
Prefix pipeline_prefix(const GeneratorSetPtr& s, const SearchBudget& budget, Trace& trace) {
  Prefix out{"", Word(s), Representation::trivial(s->dim())};
  std::size_t d = s->dim();
  if (d < 2) {
    out.failure = "dimension at least 2";
    return out;
  }
  try {
    EscapeResult e = escape_search(s, EscapePredicate::semisimple_infinite_order(), budget.max_power, budget.node_cap);
    trace.add("escape", {{"predicate", "semisimple_infinite_order"}, {"word", e.word.to_string()}, {"k", e.k},
                         {"trace", e.word.matrix().trace()}});
  } catch (const NotFound&) {
    trace.add("escape", {{"predicate", "semisimple_infinite_order"}, {"result", "not_found"}});
    out.failure = "no semisimple element of infinite order in Sigma^" + std::to_string(budget.max_power) +
                  " (consistent with virtual nilpotency; not a proof)";
    return out;
  } catch (const BudgetExceeded& b) {
    trace.add("escape", {{"predicate", "semisimple_infinite_order"}, {"result", "node_cap"}, {"complete", b.complete()}});
    out.failure = "node cap reached during escape search";
    return out;
  }

  // alpha: maximal Lambda over Sigma^R, R = min(d^2, max_power); ties go to
  // the shortlex-least word.
  int radius = std::min<int>(static_cast<int>(d * d), budget.max_power);
  WordLayers layers(s, budget.node_cap, true);
  std::optional<WordLayers::Node> best;
  std::optional<AlgebraicReal> best_l4;
  double best_double = 0;
  try {
    while (layers.depth() < radius && layers.next()) {
      const auto& nodes = layers.current();
      std::vector<double> approx(nodes.size());
#pragma omp parallel for schedule(dynamic, 16)
      for (std::size_t i = 0; i < nodes.size(); ++i)
        approx[i] = to_eigen(nodes[i].value).eigenvalues().cwiseAbs().maxCoeff();
      double layer_top = *std::max_element(approx.begin(), approx.end());
      double cut = std::max(best_double, layer_top) * (1 - 1e-6);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (approx[i] < cut) continue;
        AlgebraicReal l4 = AlgebraicReal::largest_root(squared_products_polynomial(char_poly(nodes[i].value)));
        if (!best || compare(l4, *best_l4) > 0) {
          best = nodes[i];
          best_l4 = l4;
          best_double = std::max(best_double, approx[i]);
        }
      }
      trace.add("lambda_ball", {{"radius", layers.depth()}, {"lambda", root_enclosure(*best_l4, 4, Rational(1, 1 << 20))}});
    }
  } catch (const BudgetExceeded& b) {
    trace.add("lambda_ball", {{"result", "node_cap"}, {"complete", b.complete()}});
  }
  if (!best || count_roots_above(best_l4->polynomial(), Rational(1)) == 0) {
    out.failure = "Lambda = 1 on Sigma^" + std::to_string(radius);
    trace.add("alpha", {{"result", "lambda_one"}});
    return out;
  }
  out.alpha = layers.word(*best);
  trace.add("alpha", {{"word", out.alpha.to_string()},
                      {"length", out.alpha.length()},
                      {"lambda", root_enclosure(*best_l4, 4, Rational(1, 1 << 20))}});

  ConjugationResult c = conjugation_reduce(*s);
  trace.add("conjugate", {{"identity", tf(c.h.is_identity())},
                          {"initial_norm", c.initial_norm},
                          {"achieved_norm", c.achieved_norm}});

  WedgeChoice w;
  try {
    w = select_wedge_power(out.alpha.matrix());
  } catch (const Undecided& u) {
    out.failure = std::string("wedge power: ") + u.what();
    trace.add("wedge", {{"result", "undecided"}});
    return out;
  }
  // Achieved exponent e with ratio = Lambda^e.
  RationalInterval expo = log_interval(w.ratio, 40) / log_interval(w.lambda, 40);
  trace.add("wedge", {{"i", w.i}, {"ratio", w.ratio}, {"exponent", expo}});
  out.rep = Representation{c.h, w.i};

  Matrix ra = out.rep.apply(out.alpha.matrix());
  try {
    QuasiDiagonalization q = quasi_diagonalize(ra);
    trace.add("quasi_diagonalize", {{"lambda1", q.lambda1}, {"defect", round_up(q.defect, 32)},
                                    {"norm_check", tf(q.norm_check)}});
  } catch (const InvalidInput&) {
    trace.add("quasi_diagonalize", {{"result", "no_gap"}});
  }
  return out;
}

Rational param(const std::optional<Rational>& x, const Rational& fallback) { return x ? *x : fallback; }

}  // namespace

SearchOutcome<SemigroupCertificate> find_semigroup_pair(const GeneratorSetPtr& s, const SearchBudget& budget) {
  SearchOutcome<SemigroupCertificate> out;
  Rational eps = param(budget.epsilon, Rational(1, 10)), r = param(budget.r, Rational(1, 2));
  out.trace.add("start", {{"mode", "semigroup"}, {"epsilon", eps}, {"r", r}, {"max_power", budget.max_power}});
  if (eps <= 0 || eps > Rational(1, 3) || r <= 4 * eps * eps || r > 1) {
    out.reason = eps <= 0 || eps > Rational(1, 3) ? "epsilon <= 1/3 (ping lemma hypothesis)"
                 : r > 1                          ? "r <= 1"
                                                  : "r > 4*epsilon^2 (ping lemma hypothesis)";
    out.trace.add("result", {{"found", "false"}});
    return out;
  }
  Prefix pre = pipeline_prefix(s, budget, out.trace);
  if (!pre.failure.empty()) {
    out.reason = pre.failure;
    out.trace.add("result", {{"found", "false"}});
    return out;
  }
  FrameOptions fo{budget.precision_bits};
  Rational eps3 = eps * eps * eps;
  int j_max = static_cast<int>(pre.rep.dim());
  for (int n = 1; n <= budget.max_exponent && n * static_cast<int>(pre.alpha.length()) < budget.max_power; ++n) {
    Word a = pre.alpha.power(n);
    Matrix ra = pre.rep.apply(a.matrix());
    ContractionOutcome co = contraction_certify(ra, eps3, r, ContractionMode::proximal, fo);
    out.trace.add("power", {{"n", n}, {"length", a.length()}, {"certified", tf(co.certified)}});
    if (!co.certified) continue;
    const ContractionWitness& wa = co.forward;
    // B scan: shortlex words W and powers W^j moving v off H, each passed to
    // the ping verifier; the first verified pair wins.
    int room = budget.max_power - static_cast<int>(a.length());
    WordLayers layers(s, budget.node_cap, true);
    std::size_t tried = 0, examined = 0;
    try {
      while (layers.depth() < room && layers.next()) {
        for (const auto& node : layers.current()) {
          Word w = layers.word(node);
          Matrix rw = pre.rep.apply(node.value), rb = rw;
          ProjPoint x = image(rb, wa.v);
          for (int j = 1; j <= j_max && j * layers.depth() <= room; ++j) {
            if (j > 1) {
              rb = rb * rw;
              x = image(rw, x);
            }
            if (++examined > budget.max_candidates) throw BudgetExceeded("candidate cap", layers.depth());
            if (point_hyperplane_distance_sq(x, wa.H) < eps * eps) continue;
            ++tried;
            Word b = w.power(j);
            auto v = verify_ping(a, b, eps, r, pre.rep, fo);
            if (!v.certified()) continue;
            out.trace.add("escape", {{"predicate", "moves_point_off_hyperplane"}, {"word", w.to_string()},
                                     {"k", layers.depth()}, {"j", j}, {"tried", tried}});
            out.found_in_power = v.certificate->found_in_power;
            out.trace.add("verify_ping", {{"a", a.to_string()},
                                          {"b", b.to_string()},
                                          {"sv_ratio", v.certificate->witness_a.sv_ratio},
                                          {"frame_error", round_up(v.certificate->witness_a.frame_error, 64)},
                                          {"d_bv_H_sq", round_down(v.certificate->bv_h_distance_sq, 64)},
                                          {"lip_b", v.certificate->lip_b.lip_hi}});
            out.trace.add("result", {{"found", "true"}, {"found_in_power", out.found_in_power}});
            out.certificate = std::move(v.certificate);
            return out;
          }
        }
      }
    } catch (const BudgetExceeded&) {
    }
    out.trace.add("escape", {{"predicate", "moves_point_off_hyperplane"}, {"result", "not_found"}, {"tried", tried}});
  }
  out.reason = "no ping pair within Sigma^" + std::to_string(budget.max_power);
  out.trace.add("result", {{"found", "false"}});
  return out;
}

SearchOutcome<FreeGroupCertificate> find_free_pair(const GeneratorSetPtr& s, const SearchBudget& budget) {
  SearchOutcome<FreeGroupCertificate> out;
  Rational eps = param(budget.epsilon, Rational(1, 100)), r = param(budget.r, Rational(1, 2));
  out.trace.add("start", {{"mode", "free"}, {"epsilon", eps}, {"r", r}, {"max_power", budget.max_power}});
  if (eps <= 0 || r <= 2 * eps || r > 1) {
    out.reason = r > 1 ? "r <= 1" : "r > 2*epsilon (ping-pong hypothesis)";
    out.trace.add("result", {{"found", "false"}});
    return out;
  }
  Prefix pre = pipeline_prefix(s, budget, out.trace);
  if (!pre.failure.empty()) {
    out.reason = pre.failure;
    out.trace.add("result", {{"found", "false"}});
    return out;
  }
  FrameOptions fo{budget.precision_bits};
  auto very_proximal = [&](const Word& w) {
    return contraction_certify(pre.rep.apply(w.matrix()), eps, r, ContractionMode::very_proximal, fo).certified;
  };
  int alen = static_cast<int>(pre.alpha.length());

  // Short words with their letters, for the B, w and u scans.
  std::vector<std::vector<Letter>> short_words{{}};
  int short_len = std::max(0, (budget.max_power + 1) / 2);
  {
    WordLayers layers(s, budget.node_cap, true);
    try {
      while (layers.depth() < short_len && layers.next())
        for (const auto& n : layers.current()) short_words.push_back(n.letters);
    } catch (const BudgetExceeded&) {
    }
  }
  auto word_of = [&](const std::vector<Letter>& l) { return Word(s, l); };
  auto letters_of = [&](const std::vector<Letter>& a, const std::vector<Letter>& b,
                        const std::vector<Letter>& c) {
    std::vector<Letter> l = a;
    l.insert(l.end(), b.begin(), b.end());
    l.insert(l.end(), c.begin(), c.end());
    return normalize_letters(*s, std::move(l));
  };
  auto positive = [](const std::vector<Letter>& l) {
    return std::none_of(l.begin(), l.end(), [](const Letter& x) { return x.inverse; });
  };
  auto inverse_letters = [&](const std::vector<Letter>& l) {
    std::vector<Letter> inv;
    for (auto it = l.rbegin(); it != l.rend(); ++it) inv.push_back({it->gen, !it->inverse});
    return normalize_letters(*s, std::move(inv));
  };

  // Second player: u P u^-1 ordered by length, then by u.
  auto find_partner = [&](const Word& p) -> bool {
    struct Cand {
      std::size_t len;
      std::size_t u;
      std::vector<Letter> letters;
    };
    std::vector<Cand> cands;
    for (std::size_t k = 1; k < short_words.size(); ++k) {
      auto q = letters_of(short_words[k], p.letters(), inverse_letters(short_words[k]));
      if (q.size() > static_cast<std::size_t>(budget.max_power) || !positive(q)) continue;
      cands.push_back({q.size(), k, std::move(q)});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.len < y.len; });
    std::unordered_set<Matrix, MatrixHash> tested;
    std::size_t tried = 0;
    for (const auto& c : cands) {
      if (tried >= budget.max_candidates) break;
      Word q = word_of(c.letters);
      if (q.matrix() == p.matrix() || q.matrix() == p.matrix().inverse()) continue;
      if (!tested.insert(q.matrix()).second) continue;
      ++tried;
      auto v = verify_pingpong(p, q, eps, r, pre.rep, fo);
      if (!v.certified()) continue;
      out.trace.add("conjugate_partner", {{"u", word_of(short_words[c.u]).to_string()},
                                          {"b", q.to_string()},
                                          {"length", q.length()},
                                          {"tried", tried}});
      Rational min_sep = v.certificate->cross_separations[0];
      for (const auto& x : v.certificate->cross_separations) min_sep = std::min(min_sep, x);
      out.found_in_power = v.certificate->found_in_power;
      out.trace.add("verify_pingpong", {{"a", p.to_string()},
                                        {"b", q.to_string()},
                                        {"min_cross_sq", round_down(min_sep, 64)},
                                        {"sv_ratio_a", v.certificate->witness_a.forward.sv_ratio},
                                        {"sv_ratio_b", v.certificate->witness_b.forward.sv_ratio}});
      out.trace.add("result", {{"found", "true"}, {"found_in_power", out.found_in_power}});
      out.certificate = std::move(v.certificate);
      return true;
    }
    out.trace.add("conjugate_partner", {{"a", p.to_string()}, {"result", "not_found"}, {"tried", tried}});
    return false;
  };

  // First player, direct route: powers of alpha.
  for (int n = 1; n <= budget.max_exponent && n * alen <= budget.max_power; ++n) {
    Word p = pre.alpha.power(n);
    bool ok = very_proximal(p);
    out.trace.add("power", {{"n", n}, {"length", p.length()}, {"very_proximal", tf(ok)}});
    if (ok && find_partner(p)) return out;
    if (ok) break;
  }

  // Fallback route: w * alpha^m0 B alpha^-m0 scanned by length, then m0, B, w.
  struct Cand {
    std::size_t len;
    int m0;
    std::size_t b, w;
    std::vector<Letter> letters;
  };
  std::vector<Cand> cands;
  std::size_t b_limit = 0;
  for (std::size_t k = 1; k < short_words.size() && short_words[k].size() <= s->dim() * s->dim(); ++k) b_limit = k;
  for (int m0 = 1; m0 <= budget.max_exponent && 2 * m0 * alen < budget.max_power; ++m0) {
    auto am = pre.alpha.power(m0).letters();
    auto ami = pre.alpha.power(-m0).letters();
    for (std::size_t b = 1; b <= b_limit; ++b) {
      auto core = letters_of(am, short_words[b], ami);
      for (std::size_t w = 0; w < short_words.size() && short_words[w].size() <= 2; ++w) {
        auto l = letters_of(short_words[w], core, {});
        if (l.empty() || l.size() > static_cast<std::size_t>(budget.max_power) || !positive(l)) continue;
        cands.push_back({l.size(), m0, b, w, std::move(l)});
      }
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.len < y.len; });
  std::size_t tested = 0;
  for (const auto& c : cands) {
    if (++tested > budget.max_candidates) break;
    Word p = word_of(c.letters);
    if (!very_proximal(p)) continue;
    out.trace.add("very_contracting", {{"m0", c.m0},
                                       {"B", word_of(short_words[c.b]).to_string()},
                                       {"w", word_of(short_words[c.w]).to_string()},
                                       {"length", p.length()}});
    if (find_partner(p)) return out;
  }
  out.reason = "no ping-pong pair within Sigma^" + std::to_string(budget.max_power);
  out.trace.add("result", {{"found", "false"}});
  return out;
}

}  // namespace pingcert
