#pragma once

// The quantized cat map on L^2(Z_N): translations T_N(a), quantized
// observables Op_N(f), the unitary U_N(A), its eigenspaces, and the
// eigenfunction matrix-element quantities built from them.
//
// States use the inner product <phi, psi> = (1/N) sum phi(u) conj(psi(u)),
// so a normalized state has sum |psi(u)|^2 = N. Dense linear algebra works
// with standard-orthonormal bases; QState converts.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "matpow/budget.hpp"
#include "matpow/ffield.hpp"
#include "matpow/matgrp.hpp"

namespace matpow::cat {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using cplx = std::complex<double>;

struct IntPair {
  std::int64_t a1 = 0;
  std::int64_t a2 = 0;

  friend bool operator==(const IntPair&, const IntPair&) = default;
};

struct QState {
  int N = 0;
  CVector amplitudes;

  /// (1/N) sum phi(u) conj(psi(u)).
  cplx inner(const QState& other) const;
};

enum class OpTag { General, Unitary, Hermitian };

struct QOperator {
  int N = 0;
  CMatrix m;
  OpTag tag = OpTag::General;
};

/// Finite Fourier expansion f(v) = sum fhat(a) e(a . v) on the torus.
struct Observable {
  std::vector<std::pair<IntPair, cplx>> fourier;
  bool real = false;

  static Observable constant(double c);
  /// fhat(a) = fhat(-a) = c / 2 (real-valued, flagged real).
  static Observable symmetric_pair(IntPair a, double c);

  Observable& add(IntPair a, cplx c);
  /// fhat(0, 0).
  cplx mean() const;
  /// fhat(-a) = conj(fhat(a)) on the support, within `tol`.
  bool is_real_valued(double tol = 1e-12) const;
  /// sum over a != 0 of |fhat(a)|.
  double l1_nonconstant() const;
};

/// An integer matrix in SL(2, Z) with |trace| > 2 and a11 a12 = a21 a22 = 0 mod 2.
class CatMatrix {
 public:
  /// Throws InvalidArgument when any of the conditions fails.
  static CatMatrix make(std::int64_t a11, std::int64_t a12, std::int64_t a21, std::int64_t a22);

  std::int64_t a11() const noexcept { return a_[0]; }
  std::int64_t a12() const noexcept { return a_[1]; }
  std::int64_t a21() const noexcept { return a_[2]; }
  std::int64_t a22() const noexcept { return a_[3]; }
  std::int64_t trace() const noexcept { return a_[0] + a_[3]; }

  /// Row vector times matrix: aA.
  IntPair act(const IntPair& a) const noexcept;
  mat::Matrix mod_p(const ff::Field& f) const;

 private:
  explicit CatMatrix(std::int64_t a11, std::int64_t a12, std::int64_t a21, std::int64_t a22)
      : a_{a11, a12, a21, a22} {}
  std::int64_t a_[4];
};

/// (T_N(a) psi)(u) = e^{i pi a1 a2 / N} e^{2 pi i a2 u / N} psi(u + a1).
QOperator translation_op(int N, IntPair a);

/// Op_N(f) = sum fhat(a) T_N(a); tagged Hermitian when f.real.
QOperator quantize(int N, const Observable& f);

/// U[Q', Q] = N^{-1/2} exp(2 pi i (2 a21)^{-1} (a22 Q^2 - 2 Q Q' + a11 Q'^2) / N)
/// with the first non-zero entry of column 0 made real positive. This kernel
/// satisfies U* T_N(a) U = T_N(aA) up to a unit scalar.
/// Throws EvenModulus, CompositeModulus, SingularLowerLeft (a21 = 0 mod N).
QOperator cat_unitary(int N, const CatMatrix& a);

/// cat_unitary, extended to a21 = 0 mod N through U(A) = U(B) U(B^{-1} A)
/// with B = [[1, 0], [2, 1]]. Same phase convention.
QOperator cat_unitary_factored(int N, const CatMatrix& a);

struct Eigenspace {
  cplx eigenvalue;
  CMatrix basis;  // standard-orthonormal columns

  int dim() const { return static_cast<int>(basis.cols()); }
  /// Basis columns rescaled to unit norm under the (1/N) inner product.
  std::vector<QState> states() const;
};

/// Schur decomposition of a unitary operator with eigenvalues clustered at
/// tolerance 1e-8. Throws BudgetError when N exceeds budget.max_quantum_dim.
std::vector<Eigenspace> eigenbasis(const QOperator& u, const Budget& budget = Budget::from_env());

/// ||U U^* - I||_F.
double unitarity_defect(const CMatrix& u);
/// min over theta of ||U^* T(a) U - e^{i theta} T(aA)||_F.
double egorov_defect(const QOperator& u, const CatMatrix& a, IntPair v);

/// max over eigenspaces V of the largest |eigenvalue| of the compression of
/// Op_N(f) - fhat(0) I to V: the sup over all normalized eigenfunctions.
/// Throws NonRealObservable.
double delta_Nf(const CatMatrix& a, int N, const Observable& f, const Budget& budget = Budget::from_env());
double delta_from_spaces(const std::vector<Eigenspace>& spaces, const QOperator& op, cplx mean);

struct NumericalRadius {
  double estimate = 0.0;  // grid maximum refined by golden-section search
  double upper = 0.0;     // grid maximum / cos(pi / grid): a guaranteed upper bracket
};

/// max |v* C v| over unit v via the support function
/// theta -> lambda_max((e^{i theta} C + e^{-i theta} C^*) / 2).
NumericalRadius numerical_radius(const CMatrix& c, int grid = 720);

struct MatrixElementReport {
  int p = 0;
  IntPair a;
  int nu = 0;
  std::uint64_t tau = 0;
  std::uint64_t q_count = 0;  // Q_{nu,2,p}(A mod p)
  double radius = 0.0;        // sup over eigenfunctions of |<T_p(a) psi, psi>|
  double radius_upper = 0.0;
  double lhs = 0.0;           // radius^{2 nu}
  double lhs_upper = 0.0;
  double rhs = 0.0;           // tau^{-2 nu} p Q
  bool holds = false;
  bool holds_upper = false;
};

/// Compares sup |<T_p(a) psi, psi>|^{2nu} with tau^{-2nu} p Q_{nu,2,p}(A).
/// Throws DependentVectors (a, aA dependent mod p), InvalidArgument (A mod p
/// not diagonalizable, nu outside {2, 3}), and the cat_unitary errors.
MatrixElementReport matrix_element_check(const CatMatrix& a, int p, IntPair v, int nu,
                                         const Budget& budget = Budget::from_env());

}  // namespace matpow::cat
