#include "matpow/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matpow/error.hpp"

namespace matpow::count {

namespace {

using u128 = unsigned __int128;

void check_budget(const char* op, double estimated, double cap) {
  if (estimated > cap) throw BudgetError(op, estimated, cap);
}

double ipow(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

/// A set of m points in F_q^d, stored flat with stride d.
struct Points {
  Field f;
  int d = 0;
  std::vector<Elem> flat;
  std::size_t m() const { return d == 0 ? 0 : flat.size() / static_cast<std::size_t>(d); }
};

template <typename Code>
Code encode(const Field& f, const Elem* xs, int d) {
  Code c = 0;
  for (int i = d - 1; i >= 0; --i) c = c * static_cast<Code>(f.size()) + static_cast<Code>(f.index(xs[i]));
  return c;
}

template <typename Code>
PackedKey decode(const Field& f, Code c, int d) {
  PackedKey k;
  k.len = static_cast<std::uint8_t>(d);
  for (int i = 0; i < d; ++i) {
    k.words[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(c % static_cast<Code>(f.size()));
    c /= static_cast<Code>(f.size());
  }
  return k;
}

template <typename Code>
struct Group {
  Code code;
  std::uint64_t count;
};

/// All k-fold sums of the points, grouped by value. Only multisets
/// x_1 <= ... <= x_k are enumerated; each carries its number of orderings,
/// so the counts are over ordered k-tuples.
template <typename Code>
std::vector<Group<Code>> grouped_sums(const Points& pts, int k) {
  const Field& f = pts.f;
  const int d = pts.d;
  const std::size_t m = pts.m();
  std::uint64_t k_fact = 1;
  for (int i = 2; i <= k; ++i) k_fact *= static_cast<std::uint64_t>(i);

  std::vector<Group<Code>> out;
  std::vector<Elem> partial(static_cast<std::size_t>((k + 1) * d), f.zero());

  auto rec = [&](auto&& self, int depth, std::size_t start, int run, std::uint64_t denom) -> void {
    const Elem* cur = &partial[static_cast<std::size_t>(depth * d)];
    if (depth == k) {
      out.push_back({encode<Code>(f, cur, d), k_fact / denom});
      return;
    }
    Elem* next = &partial[static_cast<std::size_t>((depth + 1) * d)];
    for (std::size_t i = start; i < m; ++i) {
      const Elem* pt = &pts.flat[i * static_cast<std::size_t>(d)];
      for (int j = 0; j < d; ++j) next[j] = f.add(cur[j], pt[j]);
      const int new_run = (depth > 0 && i == start) ? run + 1 : 1;
      self(self, depth + 1, i, new_run, denom * static_cast<std::uint64_t>(new_run));
    }
  };
  // `start` doubles as the previous index: the loop begins at it.
  rec(rec, 0, 0, 0, 1);

  std::sort(out.begin(), out.end(), [](const Group<Code>& a, const Group<Code>& b) { return a.code < b.code; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (w > 0 && out[w - 1].code == out[i].code) {
      out[w - 1].count += out[i].count;
    } else {
      out[w++] = out[i];
    }
  }
  out.resize(w);
  return out;
}

enum class CodeWidth { W64, W128 };

CodeWidth code_width(const Field& f, int d) {
  const long double bits = static_cast<long double>(d) * std::log2(static_cast<long double>(f.size()));
  if (bits < 63.0L) return CodeWidth::W64;
  if (bits < 127.0L) return CodeWidth::W128;
  throw Error(ErrorCode::UnsupportedDimension, "sum keys exceed 127 bits (q^d too large)");
}

std::uint64_t square_sum(const Points& pts, int k) {
  std::uint64_t s = 0;
  auto acc = [&s](const auto& groups) {
    for (const auto& g : groups) s += g.count * g.count;
  };
  if (code_width(pts.f, pts.d) == CodeWidth::W64) {
    acc(grouped_sums<std::uint64_t>(pts, k));
  } else {
    acc(grouped_sums<u128>(pts, k));
  }
  return s;
}

/// Entry positions on which the restriction map from the algebra F_q[A]
/// (spanned by I, A, ..., A^{n-1}) is injective: the pivot columns of the
/// row-reduced basis.
std::vector<int> algebra_pivots(const Matrix& a) {
  const Field& f = a.field();
  const int n = a.n();
  const int cols = n * n;
  std::vector<Elem> rows;
  Matrix p = Matrix::identity(f, n);
  for (int i = 0; i < n; ++i) {
    rows.insert(rows.end(), p.entries().begin(), p.entries().end());
    p = p * a;
  }
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < n; ++c) {
    int piv = -1;
    for (int i = r; i < n; ++i) {
      if (rows[static_cast<std::size_t>(i * cols + c)] != f.zero()) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    for (int j = 0; j < cols; ++j) {
      std::swap(rows[static_cast<std::size_t>(r * cols + j)], rows[static_cast<std::size_t>(piv * cols + j)]);
    }
    const Elem inv = f.inv(rows[static_cast<std::size_t>(r * cols + c)]);
    for (int i = 0; i < n; ++i) {
      if (i == r) continue;
      const Elem factor = f.mul(rows[static_cast<std::size_t>(i * cols + c)], inv);
      if (factor == f.zero()) continue;
      for (int j = 0; j < cols; ++j) {
        auto& x = rows[static_cast<std::size_t>(i * cols + j)];
        x = f.sub(x, f.mul(factor, rows[static_cast<std::size_t>(r * cols + j)]));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

Points matrix_orbit_points(const MatEntity& a) {
  const auto pivots = algebra_pivots(a.matrix());
  Points pts{a.field(), static_cast<int>(pivots.size()), {}};
  pts.flat.reserve(a.tau() * pivots.size());
  Matrix p = a.matrix();
  for (std::uint64_t x = 1; x <= a.tau(); ++x) {
    for (int c : pivots) pts.flat.push_back(p.entries()[static_cast<std::size_t>(c)]);
    p = p * a.matrix();
  }
  return pts;
}

Points vector_orbit_points(const Vec& v, const MatEntity& a) {
  if (v.is_zero()) throw Error(ErrorCode::ZeroVector, "orbit of the zero vector");
  if (!(v.field == a.field())) throw Error(ErrorCode::FieldMismatch, "vector and matrix fields differ");
  if (v.n() != a.n()) throw Error(ErrorCode::InvalidArgument, "vector length does not match the matrix");
  Points pts{a.field(), v.n(), {}};
  pts.flat.reserve(a.tau() * static_cast<std::size_t>(v.n()));
  Vec cur = v;
  for (std::uint64_t x = 1; x <= a.tau(); ++x) {
    cur = v.orientation == mat::Orientation::Row ? cur * a.matrix() : a.matrix() * cur;
    pts.flat.insert(pts.flat.end(), cur.entries.begin(), cur.entries.end());
  }
  return pts;
}

double q_nu_cap(const Budget& b, int nu) { return nu <= 2 ? b.q2 : b.q3; }

void require_nu(int nu) {
  if (nu < 1 || nu > 3) throw Error(ErrorCode::InvalidArgument, "nu must be 1, 2 or 3");
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Convolution: return "convolution";
    case Method::Naive: return "naive";
    case Method::EigenvalueReduction: return "eigenvalue-reduction";
    case Method::DirectScan: return "direct-scan";
  }
  return "unknown";
}

std::uint64_t SumDistribution::square_sum() const {
  std::uint64_t s = 0;
  for (const auto& [k, c] : counts) s += c * c;
  return s;
}

std::uint64_t SumDistribution::at(const PackedKey& k) const {
  const auto it = counts.find(k);
  return it == counts.end() ? 0 : it->second;
}

PackedKey add_keys(const Field& f, const PackedKey& x, const PackedKey& y) {
  if (x.len != y.len) throw Error(ErrorCode::InvalidArgument, "keys of different length");
  PackedKey out;
  out.len = x.len;
  for (std::size_t i = 0; i < x.len; ++i) {
    out.words[i] = f.index(f.add(f.element_at(x.words[i]), f.element_at(y.words[i])));
  }
  return out;
}

CountResult count_Q(const MatEntity& a, int nu, const Budget& budget) {
  require_nu(nu);
  check_budget("count_Q", ipow(static_cast<double>(a.tau()), nu), q_nu_cap(budget, nu));
  const Points pts = matrix_orbit_points(a);
  return {square_sum(pts, nu), Method::Convolution, a.tau(), "nu=" + std::to_string(nu)};
}

CountResult count_Q_by_eigenvalues(const MatEntity& a, int nu, const Budget& budget) {
  require_nu(nu);
  if (!a.eigen() || !a.diagonalizable().value_or(false)) {
    throw Error(ErrorCode::InvalidArgument, "eigenvalue reduction needs a diagonalizable matrix");
  }
  check_budget("count_Q_by_eigenvalues", ipow(static_cast<double>(a.tau()), nu), q_nu_cap(budget, nu));
  const auto& eig = *a.eigen();
  std::vector<Elem> distinct = eig.values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  Points pts{eig.field, static_cast<int>(distinct.size()), {}};
  std::vector<Elem> cur = distinct;
  for (std::uint64_t x = 1; x <= a.tau(); ++x) {
    pts.flat.insert(pts.flat.end(), cur.begin(), cur.end());
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = eig.field.mul(cur[i], distinct[i]);
  }
  return {square_sum(pts, nu), Method::EigenvalueReduction, a.tau(), "nu=" + std::to_string(nu)};
}

SumDistribution orbit_sum_distribution(const Vec& v, const MatEntity& a, int k, const Budget& budget) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  check_budget("orbit_sum_distribution", ipow(static_cast<double>(a.tau()), k), budget.orbit);
  const Points pts = vector_orbit_points(v, a);
  SumDistribution out;
  out.arity = k;
  out.total = 1;
  for (int i = 0; i < k; ++i) out.total *= a.tau();
  auto fill = [&](const auto& groups) {
    out.counts.reserve(groups.size());
    for (const auto& g : groups) out.counts.emplace(decode(pts.f, g.code, pts.d), g.count);
  };
  if (code_width(pts.f, pts.d) == CodeWidth::W64) {
    fill(grouped_sums<std::uint64_t>(pts, k));
  } else {
    fill(grouped_sums<u128>(pts, k));
  }
  return out;
}

CountResult count_JK(const Vec& v, const MatEntity& a, int k, const Budget& budget) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  check_budget("count_JK", ipow(static_cast<double>(a.tau()), k), budget.orbit);
  const Points pts = vector_orbit_points(v, a);
  const char* side = v.orientation == mat::Orientation::Row ? "J" : "K";
  return {square_sum(pts, k), Method::Convolution, a.tau(), std::string(side) + ",k=" + std::to_string(k)};
}

CountResult count_product_eq(const Field& f, const Elem& xi0, const std::vector<Elem>& xis,
                             const std::vector<Elem>& lambdas, const Budget& budget) {
  if (xis.empty() || xis.size() != lambdas.size()) {
    throw Error(ErrorCode::InvalidArgument, "need matching non-empty xi and lambda lists");
  }
  if (xi0 == f.zero()) throw Error(ErrorCode::ZeroElement, "xi_0 must be non-zero");
  if (xis[0] == f.zero()) throw Error(ErrorCode::ZeroXi1, "xi_1 must be non-zero");
  std::uint64_t tau = 1;
  for (const auto& l : lambdas) {
    if (l == f.zero()) throw Error(ErrorCode::ZeroLambda, "eigenvalues must be non-zero");
    tau = ff::lcm(tau, f.mult_order(l));
  }
  check_budget("count_product_eq", static_cast<double>(tau), budget.product_eq);

  std::vector<Elem> powers = lambdas;
  std::uint64_t hits = 0;
  for (std::uint64_t x = 1; x <= tau; ++x) {
    Elem prod = f.one();
    for (std::size_t j = 0; j < xis.size(); ++j) prod = f.mul(prod, f.sub(xis[j], powers[j]));
    if (prod == xi0) ++hits;
    for (std::size_t j = 0; j < powers.size(); ++j) powers[j] = f.mul(powers[j], lambdas[j]);
  }
  return {hits, Method::DirectScan, tau, "L=" + std::to_string(f.mult_order(lambdas[0]))};
}

CoverReport sumset_cover(const Vec& a, const MatEntity& m, int k_max, const Budget& budget) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be positive");
  const Points pts = vector_orbit_points(a, m);
  const Field& f = pts.f;
  const int d = pts.d;
  const double space_d = ipow(static_cast<double>(f.size()), d);
  check_budget("sumset_cover (space)", space_d, budget.cover_space);
  const auto space = static_cast<std::uint64_t>(space_d);

  auto index_of = [&](const Elem* xs) { return encode<std::uint64_t>(f, xs, d); };
  std::vector<std::uint64_t> orbit;
  {
    std::vector<char> seen(space, 0);
    for (std::size_t i = 0; i < pts.m(); ++i) {
      const auto c = index_of(&pts.flat[i * static_cast<std::size_t>(d)]);
      if (!seen[c]) {
        seen[c] = 1;
        orbit.push_back(c);
      }
    }
  }
  double work = 0;
  double size = static_cast<double>(orbit.size());
  for (int k = 2; k <= k_max; ++k) {
    work += size * static_cast<double>(orbit.size());
    size = std::min(space_d, size * static_cast<double>(orbit.size()));
  }
  check_budget("sumset_cover", work, budget.sumset);

  std::vector<std::vector<Elem>> orbit_elems;
  orbit_elems.reserve(orbit.size());
  for (auto c : orbit) {
    const PackedKey key = decode(f, c, d);
    std::vector<Elem> e(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) e[static_cast<std::size_t>(j)] = f.element_at(key.words[static_cast<std::size_t>(j)]);
    orbit_elems.push_back(std::move(e));
  }

  CoverReport rep;
  rep.space = space;
  std::vector<std::uint64_t> members = orbit;
  std::vector<Elem> s(static_cast<std::size_t>(d)), sum(static_cast<std::size_t>(d));
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) {
      if (members.size() == space) {
        // k(aO) is already everything; adding orbit elements keeps it so.
        rep.missing.push_back(0);
        continue;
      }
      std::vector<char> next(space, 0);
      std::vector<std::uint64_t> next_members;
      for (auto c : members) {
        const PackedKey key = decode(f, c, d);
        for (int j = 0; j < d; ++j) s[static_cast<std::size_t>(j)] = f.element_at(key.words[static_cast<std::size_t>(j)]);
        for (const auto& o : orbit_elems) {
          for (int j = 0; j < d; ++j) {
            sum[static_cast<std::size_t>(j)] = f.add(s[static_cast<std::size_t>(j)], o[static_cast<std::size_t>(j)]);
          }
          const auto idx = index_of(sum.data());
          if (!next[idx]) {
            next[idx] = 1;
            next_members.push_back(idx);
          }
        }
      }
      members = std::move(next_members);
    }
    rep.missing.push_back(space - members.size());
    if (members.size() == space && !rep.first_full) rep.first_full = k;
  }
  return rep;
}

}  // namespace matpow::count
