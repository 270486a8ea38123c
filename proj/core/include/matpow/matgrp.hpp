#pragma once

// Matrices over F_q: characteristic polynomials, eigen data, orders, and
// the companion-matrix realization of trace sequences.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matpow/ffield.hpp"
#include "matpow/key.hpp"

namespace matpow::mat {

using ff::Elem;
using ff::Field;

/// Dense n x n matrix over a field, row-major.
class Matrix {
 public:
  Matrix(Field f, int n);

  static Matrix identity(const Field& f, int n);
  /// Row-major integer entries reduced into F_p.
  static Matrix from_ints(const Field& f, int n, std::initializer_list<std::int64_t> rows);
  static Matrix from_elems(const Field& f, int n, std::vector<Elem> rows);
  static Matrix diagonal(const Field& f, const std::vector<Elem>& diag);

  const Field& field() const noexcept { return field_; }
  int n() const noexcept { return n_; }
  std::span<const Elem> entries() const noexcept { return entries_; }

  Elem& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * n_ + j)]; }
  const Elem& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * n_ + j)]; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix& operator+=(const Matrix& o);
  bool operator==(const Matrix& o) const;

  Matrix pow(std::uint64_t e) const;
  Matrix scaled(const Elem& c) const;
  Elem det() const;
  Elem trace() const;
  int rank() const;
  /// Throws ZeroElement when singular.
  Matrix inverse() const;
  bool is_identity() const;
  bool is_scalar() const;
  /// Same entries viewed in `ext` (a field over the same prime).
  Matrix embed(const Field& ext) const;

  PackedKey key() const;
  std::string to_string() const;

 private:
  Field field_;
  int n_;
  std::vector<Elem> entries_;
};

enum class Orientation { Row, Column };

struct Vec {
  Field field;
  std::vector<Elem> entries;
  Orientation orientation = Orientation::Row;

  static Vec row(const Field& f, std::initializer_list<std::int64_t> xs);
  static Vec column(const Field& f, std::initializer_list<std::int64_t> xs);

  int n() const noexcept { return static_cast<int>(entries.size()); }
  bool is_zero() const;
  PackedKey key() const;
  Vec embed(const Field& ext) const;
};

/// Row vector times matrix.
Vec operator*(const Vec& row, const Matrix& m);
/// Matrix times column vector.
Vec operator*(const Matrix& m, const Vec& column);
/// Scalar product of a row and a column (orientation is not enforced).
Elem dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);

/// A polynomial over F_q stored low-degree first; monic when produced here.
using Poly = std::vector<Elem>;

enum class FactorTag { Split, Irreducible, Repeated, Mixed };
std::string to_string(FactorTag tag);

struct CharPolyFactorization {
  Poly coeffs;                  // monic characteristic polynomial
  FactorTag tag = FactorTag::Split;
  std::vector<Poly> factors;    // monic irreducible factors, repeated by multiplicity
  std::vector<Elem> rational_roots;  // roots in F_q, with multiplicity
};

struct EigenData {
  Field field;               // the matrix field or its quadratic extension
  std::vector<Elem> values;  // n values with multiplicity
};

/// Invertible matrix with eagerly computed invariants.
class MatEntity {
 public:
  static constexpr std::uint64_t kDefaultOrderCap = 1'000'000;

  /// Throws ZeroElement for singular input, OrderCapExceeded when the order
  /// has to come from power iteration and exceeds `order_cap`.
  explicit MatEntity(Matrix a, std::uint64_t order_cap = kDefaultOrderCap);

  const Matrix& matrix() const noexcept { return a_; }
  const Field& field() const noexcept { return a_.field(); }
  int n() const noexcept { return a_.n(); }

  /// Present for n <= 3.
  const std::optional<CharPolyFactorization>& factorization() const noexcept { return factorization_; }
  /// Present when every eigenvalue lives in the field or its quadratic extension.
  const std::optional<EigenData>& eigen() const noexcept { return eigen_; }
  const std::optional<bool>& diagonalizable() const noexcept { return diagonalizable_; }

  std::uint64_t tau() const noexcept { return tau_; }
  std::uint64_t t() const noexcept { return t_; }
  /// "eigen-lcm" or "power-iteration".
  const std::string& order_method() const noexcept { return order_method_; }
  /// A^1, ..., A^tau.
  std::vector<Matrix> orbit() const;

  bool in_sl() const { return a_.det() == a_.field().one(); }

 private:
  Matrix a_;
  std::optional<CharPolyFactorization> factorization_;
  std::optional<EigenData> eigen_;
  std::optional<bool> diagonalizable_;
  std::uint64_t tau_ = 0;
  std::uint64_t t_ = 0;
  std::string order_method_;
};

/// Throws UnsupportedDimension for n > 3.
const CharPolyFactorization& char_poly_factor(const MatEntity& a);
std::pair<std::uint64_t, std::uint64_t> matrix_order(const MatEntity& a);
/// Throws UnsupportedDimension for n > 3.
bool is_diagonalizable(const MatEntity& a);

/// Order of A by repeated multiplication; throws OrderCapExceeded.
std::uint64_t order_by_power_iteration(const Matrix& a, std::uint64_t cap);

/// rank{v, vA, ..., vA^{n-1}} == n for a row vector, or the mirrored
/// {b, Ab, ...} for a column vector. Throws ZeroVector.
bool independence_check(const Vec& v, const Matrix& a);
/// The same test carried out over the quadratic extension of the field.
bool independence_check_extended(const Vec& v, const Matrix& a);

struct CompanionRealization {
  Vec a;       // (Tr(a), Tr(a*lambda)) as a row over F_p
  Vec b;       // (1, 0)^T
  Matrix A;    // [[0, -1], [1, Tr(lambda)]] in SL(2, p)
};

/// For lambda of norm 1 and a != 0 in F_{p^2}: a A^x b = Tr(a lambda^x).
/// Throws WrongDegree, NormNotOne, ZeroElement.
CompanionRealization companion_realization(const Field& fq, const Elem& lambda, const Elem& a);

/// [[0, -1], [1, u]] over `f`.
Matrix companion_sl2(const Field& f, const Elem& u);

}  // namespace matpow::mat
