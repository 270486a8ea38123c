#include "matpow/matgrp.hpp"

#include <algorithm>
#include <sstream>

#include "matpow/error.hpp"

namespace matpow::mat {

namespace {

void require_same_field(const Field& a, const Field& b) {
  if (!(a == b)) throw Error(ErrorCode::FieldMismatch, "operands live in different fields");
}

// ---- polynomial helpers (low degree first) ----

void trim(const Field& f, Poly& a) {
  while (!a.empty() && a.back() == f.zero()) a.pop_back();
}

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Elem eval(const Field& f, const Poly& a, const Elem& x) {
  Elem r = f.zero();
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = f.add(f.mul(r, x), *it);
  return r;
}

Poly derivative(const Field& f, const Poly& a) {
  Poly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(f.mul(f.from_int(static_cast<std::int64_t>(i)), a[i]));
  trim(f, d);
  return d;
}

Poly poly_mod(const Field& f, Poly a, const Poly& b) {
  trim(f, a);
  const Elem lead_inv = f.inv(b.back());
  while (degree(a) >= degree(b)) {
    const Elem c = f.mul(a.back(), lead_inv);
    const int shift = degree(a) - degree(b);
    for (int i = 0; i <= degree(b); ++i) {
      a[static_cast<std::size_t>(i + shift)] = f.sub(a[static_cast<std::size_t>(i + shift)], f.mul(c, b[static_cast<std::size_t>(i)]));
    }
    trim(f, a);
  }
  return a;
}

Poly poly_gcd(const Field& f, Poly a, Poly b) {
  trim(f, a);
  trim(f, b);
  while (!b.empty()) {
    Poly r = poly_mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Elem inv = f.inv(a.back());
    for (auto& c : a) c = f.mul(c, inv);
  }
  return a;
}

/// Divides a monic polynomial by (X - r), assuming r is a root.
Poly deflate(const Field& f, const Poly& a, const Elem& r) {
  const int d = degree(a);
  Poly q(static_cast<std::size_t>(d));
  Elem carry = f.zero();
  for (int i = d; i >= 1; --i) {
    carry = f.add(f.mul(carry, r), a[static_cast<std::size_t>(i)]);
    q[static_cast<std::size_t>(i - 1)] = carry;
  }
  return q;
}

Poly linear(const Field& f, const Elem& root) { return {f.neg(root), f.one()}; }

struct QuadraticRoots {
  enum class Kind { Distinct, Double, Irreducible } kind;
  std::vector<Elem> roots;      // in the base field, when rational
  std::vector<Elem> ext_roots;  // in the quadratic extension, when irreducible over a prime field
  std::optional<Field> ext;
};

/// Roots of X^2 + c1 X + c0.
QuadraticRoots quadratic_roots(const Field& f, const Elem& c1, const Elem& c0) {
  QuadraticRoots out{};
  const Elem two_inv = f.inv(f.from_int(2));
  const Elem disc = f.sub(f.mul(c1, c1), f.mul(f.from_int(4), c0));
  const Elem minus_b = f.neg(c1);
  if (disc == f.zero()) {
    out.kind = QuadraticRoots::Kind::Double;
    const Elem r = f.mul(minus_b, two_inv);
    out.roots = {r, r};
    return out;
  }
  if (auto s = f.sqrt(disc)) {
    out.kind = QuadraticRoots::Kind::Distinct;
    out.roots = {f.mul(f.add(minus_b, *s), two_inv), f.mul(f.sub(minus_b, *s), two_inv)};
    return out;
  }
  out.kind = QuadraticRoots::Kind::Irreducible;
  if (f.degree() == 1) {
    const Field e = f.quadratic_extension();
    const auto s = e.sqrt(disc);  // disc is a square in F_{p^2}
    const Elem t2 = e.inv(e.from_int(2));
    out.ext_roots = {e.mul(e.add(minus_b, *s), t2), e.mul(e.sub(minus_b, *s), t2)};
    out.ext = e;
  }
  return out;
}

constexpr std::uint64_t kRootScanCap = 10'000'000;

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(Field f, int n) : field_(std::move(f)), n_(n), entries_(static_cast<std::size_t>(n * n)) {
  if (n < 1) throw Error(ErrorCode::UnsupportedDimension, "dimension must be positive");
}

Matrix Matrix::identity(const Field& f, int n) {
  Matrix m(f, n);
  for (int i = 0; i < n; ++i) m(i, i) = f.one();
  return m;
}

Matrix Matrix::from_ints(const Field& f, int n, std::initializer_list<std::int64_t> rows) {
  if (rows.size() != static_cast<std::size_t>(n * n)) {
    throw Error(ErrorCode::InvalidArgument, "expected n*n entries");
  }
  Matrix m(f, n);
  std::size_t i = 0;
  for (auto v : rows) m.entries_[i++] = f.from_int(v);
  return m;
}

Matrix Matrix::from_elems(const Field& f, int n, std::vector<Elem> rows) {
  if (rows.size() != static_cast<std::size_t>(n * n)) {
    throw Error(ErrorCode::InvalidArgument, "expected n*n entries");
  }
  Matrix m(f, n);
  m.entries_ = std::move(rows);
  return m;
}

Matrix Matrix::diagonal(const Field& f, const std::vector<Elem>& diag) {
  const int n = static_cast<int>(diag.size());
  Matrix m(f, n);
  for (int i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r = *this;
  r += o;
  return r;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_field(field_, o.field_);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] = field_.add(entries_[i], o.entries_[i]);
  return *this;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_same_field(field_, o.field_);
  Matrix r = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = field_.sub(entries_[i], o.entries_[i]);
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  require_same_field(field_, o.field_);
  Matrix r(field_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      const Elem a = (*this)(i, k);
      if (a == field_.zero()) continue;
      for (int j = 0; j < n_; ++j) r(i, j) = field_.add(r(i, j), field_.mul(a, o(k, j)));
    }
  }
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  return field_ == o.field_ && n_ == o.n_ && entries_ == o.entries_;
}

Matrix Matrix::pow(std::uint64_t e) const {
  Matrix r = identity(field_, n_);
  Matrix b = *this;
  while (e != 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

Matrix Matrix::scaled(const Elem& c) const {
  Matrix r = *this;
  for (auto& x : r.entries_) x = field_.mul(x, c);
  return r;
}

Elem Matrix::det() const {
  std::vector<Elem> m = entries_;
  Elem d = field_.one();
  for (int c = 0; c < n_; ++c) {
    int piv = -1;
    for (int r = c; r < n_; ++r) {
      if (m[static_cast<std::size_t>(r * n_ + c)] != field_.zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return field_.zero();
    if (piv != c) {
      for (int j = 0; j < n_; ++j) std::swap(m[static_cast<std::size_t>(piv * n_ + j)], m[static_cast<std::size_t>(c * n_ + j)]);
      d = field_.neg(d);
    }
    const Elem pv = m[static_cast<std::size_t>(c * n_ + c)];
    d = field_.mul(d, pv);
    const Elem pinv = field_.inv(pv);
    for (int r = c + 1; r < n_; ++r) {
      const Elem factor = field_.mul(m[static_cast<std::size_t>(r * n_ + c)], pinv);
      if (factor == field_.zero()) continue;
      for (int j = c; j < n_; ++j) {
        auto& cell = m[static_cast<std::size_t>(r * n_ + j)];
        cell = field_.sub(cell, field_.mul(factor, m[static_cast<std::size_t>(c * n_ + j)]));
      }
    }
  }
  return d;
}

Elem Matrix::trace() const {
  Elem t = field_.zero();
  for (int i = 0; i < n_; ++i) t = field_.add(t, (*this)(i, i));
  return t;
}

namespace {

int rank_of(const Field& f, std::vector<Elem> m, int rows, int cols) {
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[static_cast<std::size_t>(r * cols + c)] != f.zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    for (int j = 0; j < cols; ++j) std::swap(m[static_cast<std::size_t>(piv * cols + j)], m[static_cast<std::size_t>(rank * cols + j)]);
    const Elem pinv = f.inv(m[static_cast<std::size_t>(rank * cols + c)]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const Elem factor = f.mul(m[static_cast<std::size_t>(r * cols + c)], pinv);
      if (factor == f.zero()) continue;
      for (int j = 0; j < cols; ++j) {
        auto& cell = m[static_cast<std::size_t>(r * cols + j)];
        cell = f.sub(cell, f.mul(factor, m[static_cast<std::size_t>(rank * cols + j)]));
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

int Matrix::rank() const { return rank_of(field_, entries_, n_, n_); }

Matrix Matrix::inverse() const {
  const int w = 2 * n_;
  std::vector<Elem> m(static_cast<std::size_t>(n_ * w));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) m[static_cast<std::size_t>(i * w + j)] = (*this)(i, j);
    m[static_cast<std::size_t>(i * w + n_ + i)] = field_.one();
  }
  for (int c = 0; c < n_; ++c) {
    int piv = -1;
    for (int r = c; r < n_; ++r) {
      if (m[static_cast<std::size_t>(r * w + c)] != field_.zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw Error(ErrorCode::ZeroElement, "matrix is singular");
    for (int j = 0; j < w; ++j) std::swap(m[static_cast<std::size_t>(piv * w + j)], m[static_cast<std::size_t>(c * w + j)]);
    const Elem pinv = field_.inv(m[static_cast<std::size_t>(c * w + c)]);
    for (int j = 0; j < w; ++j) m[static_cast<std::size_t>(c * w + j)] = field_.mul(m[static_cast<std::size_t>(c * w + j)], pinv);
    for (int r = 0; r < n_; ++r) {
      if (r == c) continue;
      const Elem factor = m[static_cast<std::size_t>(r * w + c)];
      if (factor == field_.zero()) continue;
      for (int j = 0; j < w; ++j) {
        auto& cell = m[static_cast<std::size_t>(r * w + j)];
        cell = field_.sub(cell, field_.mul(factor, m[static_cast<std::size_t>(c * w + j)]));
      }
    }
  }
  Matrix inv(field_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) inv(i, j) = m[static_cast<std::size_t>(i * w + n_ + j)];
  }
  return inv;
}

bool Matrix::is_identity() const { return *this == identity(field_, n_); }

bool Matrix::is_scalar() const { return *this == identity(field_, n_).scaled((*this)(0, 0)); }

Matrix Matrix::embed(const Field& ext) const {
  if (ext.p() != field_.p()) throw Error(ErrorCode::FieldMismatch, "embedding needs the same prime");
  return from_elems(ext, n_, entries_);
}

PackedKey Matrix::key() const {
  if (entries_.size() > PackedKey::kCapacity) {
    throw Error(ErrorCode::UnsupportedDimension, "canonical keys cover n <= 3");
  }
  PackedKey k;
  k.len = static_cast<std::uint8_t>(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) k.words[i] = field_.index(entries_[i]);
  return k;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < n_; ++i) {
    os << (i ? ";" : "");
    for (int j = 0; j < n_; ++j) {
      const Elem& e = (*this)(i, j);
      os << (j ? " " : "") << e.c0;
      if (e.c1 != 0) os << '+' << e.c1 << 'w';
    }
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------- Vec

Vec Vec::row(const Field& f, std::initializer_list<std::int64_t> xs) {
  Vec v{f, {}, Orientation::Row};
  for (auto x : xs) v.entries.push_back(f.from_int(x));
  return v;
}

Vec Vec::column(const Field& f, std::initializer_list<std::int64_t> xs) {
  Vec v = row(f, xs);
  v.orientation = Orientation::Column;
  return v;
}

bool Vec::is_zero() const {
  return std::all_of(entries.begin(), entries.end(), [&](const Elem& e) { return e == field.zero(); });
}

PackedKey Vec::key() const {
  if (entries.size() > PackedKey::kCapacity) {
    throw Error(ErrorCode::UnsupportedDimension, "vector too long for a canonical key");
  }
  PackedKey k;
  k.len = static_cast<std::uint8_t>(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) k.words[i] = field.index(entries[i]);
  return k;
}

Vec Vec::embed(const Field& ext) const {
  if (ext.p() != field.p()) throw Error(ErrorCode::FieldMismatch, "embedding needs the same prime");
  return {ext, entries, orientation};
}

Vec operator*(const Vec& row, const Matrix& m) {
  require_same_field(row.field, m.field());
  const Field& f = m.field();
  Vec out{f, std::vector<Elem>(static_cast<std::size_t>(m.n())), Orientation::Row};
  for (int i = 0; i < m.n(); ++i) {
    const Elem a = row.entries[static_cast<std::size_t>(i)];
    if (a == f.zero()) continue;
    for (int j = 0; j < m.n(); ++j) {
      auto& cell = out.entries[static_cast<std::size_t>(j)];
      cell = f.add(cell, f.mul(a, m(i, j)));
    }
  }
  return out;
}

Vec operator*(const Matrix& m, const Vec& column) {
  require_same_field(column.field, m.field());
  const Field& f = m.field();
  Vec out{f, std::vector<Elem>(static_cast<std::size_t>(m.n())), Orientation::Column};
  for (int i = 0; i < m.n(); ++i) {
    Elem acc = f.zero();
    for (int j = 0; j < m.n(); ++j) acc = f.add(acc, f.mul(m(i, j), column.entries[static_cast<std::size_t>(j)]));
    out.entries[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

Elem dot(const Vec& a, const Vec& b) {
  require_same_field(a.field, b.field);
  Elem acc = a.field.zero();
  for (std::size_t i = 0; i < a.entries.size(); ++i) acc = a.field.add(acc, a.field.mul(a.entries[i], b.entries[i]));
  return acc;
}

Vec add(const Vec& a, const Vec& b) {
  require_same_field(a.field, b.field);
  Vec out = a;
  for (std::size_t i = 0; i < a.entries.size(); ++i) out.entries[i] = a.field.add(a.entries[i], b.entries[i]);
  return out;
}

std::string to_string(FactorTag tag) {
  switch (tag) {
    case FactorTag::Split: return "split";
    case FactorTag::Irreducible: return "irreducible";
    case FactorTag::Repeated: return "repeated";
    case FactorTag::Mixed: return "mixed";
  }
  return "unknown";
}

// ---------------------------------------------------------------- MatEntity

std::uint64_t order_by_power_iteration(const Matrix& a, std::uint64_t cap) {
  Matrix p = a;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    if (p.is_identity()) return k;
    p = p * a;
  }
  throw Error(ErrorCode::OrderCapExceeded, "matrix order exceeds " + std::to_string(cap));
}

namespace {

Poly char_poly(const Matrix& a) {
  const Field& f = a.field();
  switch (a.n()) {
    case 1:
      return {f.neg(a(0, 0)), f.one()};
    case 2:
      return {a.det(), f.neg(a.trace()), f.one()};
    case 3: {
      Elem minors = f.zero();
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          minors = f.add(minors, f.sub(f.mul(a(i, i), a(j, j)), f.mul(a(i, j), a(j, i))));
        }
      }
      return {f.neg(a.det()), minors, f.neg(a.trace()), f.one()};
    }
    default:
      throw Error(ErrorCode::UnsupportedDimension, "characteristic polynomial implemented for n <= 3");
  }
}

struct Analysis {
  CharPolyFactorization fac;
  std::optional<EigenData> eigen;
};

Analysis analyze(const Matrix& a) {
  const Field& f = a.field();
  Analysis out;
  out.fac.coeffs = char_poly(a);
  const Poly& cp = out.fac.coeffs;

  auto add_quadratic = [&](const Poly& quad, std::vector<Elem> known_roots) {
    const auto roots = quadratic_roots(f, quad[1], quad[0]);
    switch (roots.kind) {
      case QuadraticRoots::Kind::Double:
      case QuadraticRoots::Kind::Distinct:
        for (const auto& r : roots.roots) {
          out.fac.factors.push_back(linear(f, r));
          out.fac.rational_roots.push_back(r);
          known_roots.push_back(r);
        }
        out.eigen = EigenData{f, known_roots};
        break;
      case QuadraticRoots::Kind::Irreducible:
        out.fac.factors.push_back(quad);
        if (roots.ext) {
          std::vector<Elem> vals = known_roots;  // prime-field elements embed unchanged
          vals.insert(vals.end(), roots.ext_roots.begin(), roots.ext_roots.end());
          out.eigen = EigenData{*roots.ext, vals};
        }
        break;
    }
    return roots.kind;
  };

  if (a.n() == 1) {
    out.fac.tag = FactorTag::Split;
    out.fac.factors.push_back(cp);
    out.fac.rational_roots.push_back(a(0, 0));
    out.eigen = EigenData{f, {a(0, 0)}};
    return out;
  }

  if (a.n() == 2) {
    const auto kind = add_quadratic(cp, {});
    out.fac.tag = kind == QuadraticRoots::Kind::Double     ? FactorTag::Repeated
                  : kind == QuadraticRoots::Kind::Distinct ? FactorTag::Split
                                                           : FactorTag::Irreducible;
    return out;
  }

  // n == 3: look for a rational root by exhaustive scan, then split off the quadratic cofactor.
  if (f.size() > kRootScanCap) {
    throw BudgetError("cubic root scan", static_cast<double>(f.size()), static_cast<double>(kRootScanCap));
  }
  std::optional<Elem> root;
  for (std::uint64_t i = 0; i < f.size() && !root; ++i) {
    const Elem x = f.element_at(i);
    if (eval(f, cp, x) == f.zero()) root = x;
  }
  if (!root) {
    out.fac.tag = FactorTag::Irreducible;
    out.fac.factors.push_back(cp);
    return out;
  }
  out.fac.factors.push_back(linear(f, *root));
  out.fac.rational_roots.push_back(*root);
  const Poly quad = deflate(f, cp, *root);
  const auto kind = add_quadratic(quad, {*root});
  if (kind == QuadraticRoots::Kind::Irreducible) {
    out.fac.tag = FactorTag::Mixed;
  } else {
    auto rr = out.fac.rational_roots;
    std::sort(rr.begin(), rr.end());
    out.fac.tag = std::adjacent_find(rr.begin(), rr.end()) == rr.end() ? FactorTag::Split : FactorTag::Repeated;
  }
  return out;
}

bool diagonalizable_from(const Matrix& a, const CharPolyFactorization& fac) {
  const Field& f = a.field();
  const Poly g = poly_gcd(f, fac.coeffs, derivative(f, fac.coeffs));
  if (degree(g) <= 0) return true;  // squarefree characteristic polynomial
  // Repeated roots are rational for n <= 3; compare geometric and algebraic multiplicity.
  auto roots = fac.rational_roots;
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i < roots.size();) {
    std::size_t j = i;
    while (j < roots.size() && roots[j] == roots[i]) ++j;
    const int mult = static_cast<int>(j - i);
    if (mult >= 2) {
      const Matrix shifted = a - Matrix::identity(f, a.n()).scaled(roots[i]);
      if (shifted.rank() != a.n() - mult) return false;
    }
    i = j;
  }
  return true;
}

}  // namespace

MatEntity::MatEntity(Matrix a, std::uint64_t order_cap) : a_(std::move(a)) {
  const Elem d = a_.det();
  if (d == a_.field().zero()) throw Error(ErrorCode::ZeroElement, "matrix is singular");
  t_ = a_.field().mult_order(d);

  if (a_.n() <= 3) {
    Analysis an = analyze(a_);
    factorization_ = std::move(an.fac);
    eigen_ = std::move(an.eigen);
    diagonalizable_ = diagonalizable_from(a_, *factorization_);
  }

  if (diagonalizable_.value_or(false) && eigen_) {
    std::uint64_t tau = 1;
    for (const auto& v : eigen_->values) tau = ff::lcm(tau, eigen_->field.mult_order(v));
    tau_ = tau;
    order_method_ = "eigen-lcm";
  } else {
    tau_ = order_by_power_iteration(a_, order_cap);
    order_method_ = "power-iteration";
  }
}

std::vector<Matrix> MatEntity::orbit() const {
  std::vector<Matrix> out;
  out.reserve(tau_);
  Matrix p = a_;
  for (std::uint64_t x = 1; x <= tau_; ++x) {
    out.push_back(p);
    p = p * a_;
  }
  return out;
}

const CharPolyFactorization& char_poly_factor(const MatEntity& a) {
  if (!a.factorization()) throw Error(ErrorCode::UnsupportedDimension, "factorization implemented for n <= 3");
  return *a.factorization();
}

std::pair<std::uint64_t, std::uint64_t> matrix_order(const MatEntity& a) { return {a.tau(), a.t()}; }

bool is_diagonalizable(const MatEntity& a) {
  if (!a.diagonalizable()) throw Error(ErrorCode::UnsupportedDimension, "diagonalizability implemented for n <= 3");
  return *a.diagonalizable();
}

namespace {

bool krylov_full_rank(const Vec& v, const Matrix& a) {
  if (v.is_zero()) throw Error(ErrorCode::ZeroVector, "independence check of the zero vector");
  const int n = a.n();
  if (v.n() != n) throw Error(ErrorCode::InvalidArgument, "vector length differs from matrix dimension");
  std::vector<Elem> stack;
  stack.reserve(static_cast<std::size_t>(n * n));
  Vec cur = v;
  for (int i = 0; i < n; ++i) {
    stack.insert(stack.end(), cur.entries.begin(), cur.entries.end());
    cur = v.orientation == Orientation::Row ? cur * a : a * cur;
  }
  return rank_of(a.field(), std::move(stack), n, n) == n;
}

}  // namespace

bool independence_check(const Vec& v, const Matrix& a) { return krylov_full_rank(v, a); }

bool independence_check_extended(const Vec& v, const Matrix& a) {
  const Field ext = a.field().quadratic_extension();
  return krylov_full_rank(v.embed(ext), a.embed(ext));
}

Matrix companion_sl2(const Field& f, const Elem& u) {
  Matrix m(f, 2);
  m(0, 1) = f.neg(f.one());
  m(1, 0) = f.one();
  m(1, 1) = u;
  return m;
}

CompanionRealization companion_realization(const Field& fq, const Elem& lambda, const Elem& a) {
  if (fq.degree() != 2) throw Error(ErrorCode::WrongDegree, "companion realization needs F_{p^2}");
  if (a == fq.zero()) throw Error(ErrorCode::ZeroElement, "a must be nonzero");
  if (fq.norm(lambda) != 1) throw Error(ErrorCode::NormNotOne, "lambda must have norm 1");
  const Field fp = fq.prime_field();
  const Elem u = fp.from_int(static_cast<std::int64_t>(fq.trace(lambda)));
  Vec av{fp,
         {fp.from_int(static_cast<std::int64_t>(fq.trace(a))),
          fp.from_int(static_cast<std::int64_t>(fq.trace(fq.mul(a, lambda))))},
         Orientation::Row};
  Vec bv{fp, {fp.one(), fp.zero()}, Orientation::Column};
  return {std::move(av), std::move(bv), companion_sl2(fp, u)};
}

}  // namespace matpow::mat
