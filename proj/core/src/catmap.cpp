#include "matpow/catmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "matpow/counting.hpp"
#include "matpow/error.hpp"

namespace matpow::cat {

namespace {

std::int64_t mod(__int128 x, std::int64_t m) {
  __int128 r = x % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

/// e^{i pi k / N} for k in [0, 2N).
std::vector<cplx> half_roots(int N) {
  std::vector<cplx> t(static_cast<std::size_t>(2 * N));
  for (int k = 0; k < 2 * N; ++k) {
    const long double angle = std::numbers::pi_v<long double> * k / N;
    t[static_cast<std::size_t>(k)] = {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }
  return t;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, r = mod(a, m);
  while (r != 0) {
    const std::int64_t qt = g / r;
    std::tie(g, r) = std::make_pair(r, g - qt * r);
    std::tie(x, x1) = std::make_pair(x1, x - qt * x1);
  }
  if (g != 1) throw Error(ErrorCode::InvalidArgument, "no inverse modulo " + std::to_string(m));
  return mod(x, m);
}

double lambda_max_hermitian(const CMatrix& h) {
  if (h.rows() == 1) return h(0, 0).real();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

cplx QState::inner(const QState& other) const {
  // Eigen's dot conjugates its left operand.
  return other.amplitudes.dot(amplitudes) / static_cast<double>(N);
}

Observable Observable::constant(double c) {
  Observable f;
  f.fourier.push_back({{0, 0}, c});
  f.real = true;
  return f;
}

Observable Observable::symmetric_pair(IntPair a, double c) {
  Observable f;
  f.fourier.push_back({a, c / 2.0});
  f.fourier.push_back({{-a.a1, -a.a2}, c / 2.0});
  f.real = true;
  return f;
}

Observable& Observable::add(IntPair a, cplx c) {
  for (auto& [k, v] : fourier) {
    if (k == a) {
      v += c;
      return *this;
    }
  }
  fourier.push_back({a, c});
  return *this;
}

cplx Observable::mean() const {
  cplx m{};
  for (const auto& [k, v] : fourier) {
    if (k.a1 == 0 && k.a2 == 0) m += v;
  }
  return m;
}

bool Observable::is_real_valued(double tol) const {
  for (const auto& [k, v] : fourier) {
    cplx partner{};
    for (const auto& [k2, v2] : fourier) {
      if (k2.a1 == -k.a1 && k2.a2 == -k.a2) partner += v2;
    }
    if (std::abs(partner - std::conj(v)) > tol) return false;
  }
  return true;
}

double Observable::l1_nonconstant() const {
  double s = 0;
  for (const auto& [k, v] : fourier) {
    if (k.a1 != 0 || k.a2 != 0) s += std::abs(v);
  }
  return s;
}

CatMatrix CatMatrix::make(std::int64_t a11, std::int64_t a12, std::int64_t a21, std::int64_t a22) {
  if (a11 * a22 - a12 * a21 != 1) throw Error(ErrorCode::InvalidArgument, "determinant must be 1");
  if (std::abs(a11 + a22) <= 2) throw Error(ErrorCode::InvalidArgument, "cat maps need |trace| > 2");
  if ((a11 * a12) % 2 != 0 || (a21 * a22) % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "parity condition a11 a12 = a21 a22 = 0 mod 2 fails");
  }
  return CatMatrix(a11, a12, a21, a22);
}

IntPair CatMatrix::act(const IntPair& a) const noexcept {
  return {a.a1 * a_[0] + a.a2 * a_[2], a.a1 * a_[1] + a.a2 * a_[3]};
}

mat::Matrix CatMatrix::mod_p(const ff::Field& f) const { return mat::Matrix::from_ints(f, 2, {a_[0], a_[1], a_[2], a_[3]}); }

QOperator translation_op(int N, IntPair a) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  const auto roots = half_roots(N);
  QOperator t{N, CMatrix::Zero(N, N), OpTag::Unitary};
  const std::int64_t base = mod(static_cast<__int128>(a.a1) * a.a2, 2 * N);
  const std::int64_t step = mod(a.a2, N);
  const std::int64_t shift = mod(a.a1, N);
  for (int u = 0; u < N; ++u) {
    const std::int64_t k = mod(base + 2 * step * u, 2 * N);
    t.m(u, static_cast<int>((u + shift) % N)) = roots[static_cast<std::size_t>(k)];
  }
  return t;
}

QOperator quantize(int N, const Observable& f) {
  QOperator op{N, CMatrix::Zero(N, N), f.real ? OpTag::Hermitian : OpTag::General};
  for (const auto& [k, c] : f.fourier) op.m += c * translation_op(N, k).m;
  return op;
}

namespace {

// The Weil kernel for a lower-left entry invertible mod N, before the phase fix.
CMatrix weil_kernel(int N, std::int64_t a11, std::int64_t a21, std::int64_t a22) {
  const auto roots = half_roots(N);
  const std::int64_t c = inverse_mod(2 * a21, N);
  a11 = mod(a11, N);
  a22 = mod(a22, N);
  CMatrix m = CMatrix::Zero(N, N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (std::int64_t qp = 0; qp < N; ++qp) {
    for (std::int64_t qq = 0; qq < N; ++qq) {
      const std::int64_t quad = mod(a22 * qq % N * qq - 2 * qq * qp + a11 * qp % N * qp, N);
      const std::int64_t e = mod(static_cast<__int128>(c) * quad, N);
      m(static_cast<int>(qp), static_cast<int>(qq)) = scale * roots[static_cast<std::size_t>(2 * e)];
    }
  }
  return m;
}

void fix_phase(CMatrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    const cplx z = m(i, 0);
    if (std::abs(z) > 1e-14) {
      m *= std::conj(z) / std::abs(z);
      return;
    }
  }
}

void check_modulus(int N) {
  if (N % 2 == 0) throw Error(ErrorCode::EvenModulus, "N must be odd");
  if (!ff::is_prime(static_cast<std::uint64_t>(N))) throw Error(ErrorCode::CompositeModulus, "N must be prime");
}

}  // namespace

QOperator cat_unitary(int N, const CatMatrix& a) {
  check_modulus(N);
  if (mod(a.a21(), N) == 0) throw Error(ErrorCode::SingularLowerLeft, "a21 vanishes mod N");
  QOperator u{N, weil_kernel(N, a.a11(), a.a21(), a.a22()), OpTag::Unitary};
  fix_phase(u.m);
  return u;
}

QOperator cat_unitary_factored(int N, const CatMatrix& a) {
  check_modulus(N);
  if (mod(a.a21(), N) != 0) return cat_unitary(N, a);
  // A = B C with B = [[1, 0], [2, 1]] and C = B^{-1} A; the lower-left entry
  // a21 - 2 a11 of C is a unit mod N because det A = 1.
  QOperator u{N, weil_kernel(N, 1, 2, 1) * weil_kernel(N, a.a11(), a.a21() - 2 * a.a11(), a.a22() - 2 * a.a12()),
              OpTag::Unitary};
  fix_phase(u.m);
  return u;
}

std::vector<QState> Eigenspace::states() const {
  std::vector<QState> out;
  const int N = static_cast<int>(basis.rows());
  for (int j = 0; j < basis.cols(); ++j) out.push_back({N, basis.col(j) * std::sqrt(static_cast<double>(N))});
  return out;
}

std::vector<Eigenspace> eigenbasis(const QOperator& u, const Budget& budget) {
  if (u.N > budget.max_quantum_dim) {
    throw BudgetError("eigenbasis", u.N, budget.max_quantum_dim);
  }
  constexpr double kTol = 1e-8;
  Eigen::ComplexSchur<CMatrix> schur(u.m);
  const CMatrix& t = schur.matrixT();
  const CMatrix& z = schur.matrixU();

  std::vector<cplx> centers;
  std::vector<std::vector<int>> members;
  for (int i = 0; i < t.rows(); ++i) {
    const cplx lam = t(i, i);
    std::size_t j = 0;
    for (; j < centers.size(); ++j) {
      if (std::abs(lam - centers[j]) < kTol) break;
    }
    if (j == centers.size()) {
      centers.push_back(lam);
      members.emplace_back();
    }
    members[j].push_back(i);
  }

  std::vector<Eigenspace> out;
  for (std::size_t j = 0; j < centers.size(); ++j) {
    CMatrix raw(t.rows(), static_cast<int>(members[j].size()));
    cplx mean{};
    for (std::size_t k = 0; k < members[j].size(); ++k) {
      raw.col(static_cast<int>(k)) = z.col(members[j][k]);
      mean += t(members[j][k], members[j][k]);
    }
    mean /= static_cast<double>(members[j].size());
    // Re-orthonormalize; Schur vectors are orthonormal up to rounding.
    Eigen::HouseholderQR<CMatrix> qr(raw);
    CMatrix q = qr.householderQ() * CMatrix::Identity(raw.rows(), raw.cols());
    out.push_back({mean / std::abs(mean), std::move(q)});
  }
  std::sort(out.begin(), out.end(), [](const Eigenspace& a, const Eigenspace& b) {
    return std::arg(a.eigenvalue) < std::arg(b.eigenvalue);
  });
  return out;
}

double unitarity_defect(const CMatrix& u) {
  return (u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())).norm();
}

double egorov_defect(const QOperator& u, const CatMatrix& a, IntPair v) {
  const CMatrix x = u.m.adjoint() * translation_op(u.N, v).m * u.m;
  const CMatrix y = translation_op(u.N, a.act(v)).m;
  const cplx overlap = (y.adjoint() * x).trace();
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  return (x - phase * y).norm();
}

double delta_from_spaces(const std::vector<Eigenspace>& spaces, const QOperator& op, cplx mean) {
  const int N = op.N;
  const CMatrix shifted = op.m - mean * CMatrix::Identity(N, N);
  double best = 0.0;
  for (const auto& s : spaces) {
    CMatrix c = s.basis.adjoint() * shifted * s.basis;
    c = (c + c.adjoint()) * 0.5;
    if (c.rows() == 1) {
      best = std::max(best, std::abs(c(0, 0).real()));
      continue;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c, Eigen::EigenvaluesOnly);
    best = std::max(best, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return best;
}

double delta_Nf(const CatMatrix& a, int N, const Observable& f, const Budget& budget) {
  if (!f.real || !f.is_real_valued()) throw Error(ErrorCode::NonRealObservable, "observable must be real-valued");
  const QOperator u = cat_unitary(N, a);
  const auto spaces = eigenbasis(u, budget);
  return delta_from_spaces(spaces, quantize(N, f), f.mean());
}

NumericalRadius numerical_radius(const CMatrix& c, int grid) {
  if (c.rows() == 1) {
    const double r = std::abs(c(0, 0));
    return {r, r};
  }
  auto support = [&c](double theta) {
    const cplx e = std::polar(1.0, theta);
    const CMatrix h = (e * c + std::conj(e) * c.adjoint()) * 0.5;
    return lambda_max_hermitian(h);
  };
  const double step = 2.0 * std::numbers::pi / grid;
  double best = -1e300;
  double best_theta = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double v = support(j * step);
    if (v > best) {
      best = v;
      best_theta = j * step;
    }
  }
  const double upper = best / std::cos(std::numbers::pi / grid);
  // golden-section search on [best_theta - step, best_theta + step]
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_theta - step;
  double hi = best_theta + step;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = support(x1);
  double f2 = support(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = support(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = support(x1);
    }
  }
  const double estimate = std::max({best, f1, f2});
  return {estimate, std::max(upper, estimate)};
}

MatrixElementReport matrix_element_check(const CatMatrix& a, int p, IntPair v, int nu, const Budget& budget) {
  if (nu != 2 && nu != 3) throw Error(ErrorCode::InvalidArgument, "nu must be 2 or 3");
  const ff::Field f = ff::Field::make(static_cast<std::uint64_t>(p), 1);
  const mat::Matrix am = a.mod_p(f);
  const mat::Vec row{f, {f.from_int(v.a1), f.from_int(v.a2)}, mat::Orientation::Row};
  if (row.is_zero() || !mat::independence_check(row, am)) {
    throw Error(ErrorCode::DependentVectors, "a and aA are dependent mod p");
  }
  const mat::MatEntity ent(am);
  if (!ent.diagonalizable().value_or(false)) {
    throw Error(ErrorCode::InvalidArgument, "A mod p is not diagonalizable");
  }
  const auto q = count::count_Q(ent, nu, budget);

  const QOperator u = cat_unitary(p, a);
  const auto spaces = eigenbasis(u, budget);
  const CMatrix t = translation_op(p, v).m;
  MatrixElementReport r;
  r.p = p;
  r.a = v;
  r.nu = nu;
  r.tau = ent.tau();
  r.q_count = q.value;
  for (const auto& s : spaces) {
    const NumericalRadius w = numerical_radius(s.basis.adjoint() * t * s.basis);
    r.radius = std::max(r.radius, w.estimate);
    r.radius_upper = std::max(r.radius_upper, w.upper);
  }
  r.lhs = std::pow(r.radius, 2 * nu);
  r.lhs_upper = std::pow(r.radius_upper, 2 * nu);
  r.rhs = std::pow(static_cast<double>(r.tau), -2.0 * nu) * p * static_cast<double>(r.q_count);
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-6);
  r.holds_upper = r.lhs_upper <= r.rhs * (1.0 + 1e-6);
  return r;
}

}  // namespace matpow::cat
