#pragma once

// Exact arithmetic in F_p and F_{p^2} = F_p[w]/(w^2 - r), with r the least
// quadratic non-residue mod p. Elements are pairs (c0, c1) meaning c0 + c1*w.

#include <complex>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace matpow::ff {

using Residue = std::uint64_t;

struct Elem {
  Residue c0 = 0;
  Residue c1 = 0;

  friend bool operator==(const Elem&, const Elem&) = default;
  friend auto operator<=>(const Elem&, const Elem&) = default;
};

struct PrimePower {
  std::uint64_t prime = 0;
  int exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

constexpr std::uint64_t kMaxPrime = 1'000'000;

bool is_prime(std::uint64_t n);
std::vector<PrimePower> factorize(std::uint64_t n);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
/// Throws OutOfRange on 64-bit overflow.
std::uint64_t lcm(std::uint64_t a, std::uint64_t b);

/// Least t >= 1 with x^t = 1 in a group of order `group_order`, given the
/// factorization of that order and a callback computing x^e == 1.
template <typename IsIdentityPow>
std::uint64_t order_from_factorization(std::uint64_t group_order, const std::vector<PrimePower>& fac,
                                       IsIdentityPow&& is_identity_pow) {
  std::uint64_t t = group_order;
  for (const auto& [ell, e] : fac) {
    for (int i = 0; i < e && t % ell == 0; ++i) {
      if (!is_identity_pow(t / ell)) break;
      t /= ell;
    }
  }
  return t;
}

/// Immutable field context. Copies share the same underlying data.
class Field {
 public:
  /// make_field: p an odd prime <= kMaxPrime, degree 1 or 2.
  static Field make(std::uint64_t p, int degree);

  std::uint64_t p() const noexcept { return d_->p; }
  int degree() const noexcept { return d_->degree; }
  /// q = p^degree.
  std::uint64_t size() const noexcept { return d_->q; }
  /// The least non-residue r; for degree 2 this is the reducing w^2 = r.
  Residue nonresidue() const noexcept { return d_->r; }
  std::uint64_t group_order() const noexcept { return d_->q - 1; }
  const std::vector<PrimePower>& group_order_factorization() const noexcept { return d_->factorization; }
  Elem primitive_root() const noexcept { return d_->primitive_root; }

  bool operator==(const Field& o) const noexcept { return p() == o.p() && degree() == o.degree(); }

  Elem zero() const noexcept { return {}; }
  Elem one() const noexcept { return {1, 0}; }
  Elem from_int(std::int64_t v) const noexcept;
  /// c0 + c1*w with both coordinates reduced mod p; c1 must be 0 for degree 1.
  Elem element(std::int64_t c0, std::int64_t c1 = 0) const;
  bool contains(const Elem& x) const noexcept;
  bool in_prime_field(const Elem& x) const noexcept { return x.c1 == 0; }

  Elem add(const Elem& x, const Elem& y) const noexcept;
  Elem sub(const Elem& x, const Elem& y) const noexcept;
  Elem neg(const Elem& x) const noexcept;
  Elem mul(const Elem& x, const Elem& y) const noexcept;
  Elem pow(Elem x, std::uint64_t e) const noexcept;
  /// Throws ZeroElement.
  Elem inv(const Elem& x) const;
  Elem div(const Elem& x, const Elem& y) const { return mul(x, inv(y)); }

  /// x^p; the identity on F_p.
  Elem frobenius(const Elem& x) const noexcept;
  /// (x + x^p, x * x^p) for degree 2; throws WrongDegree otherwise.
  std::pair<Elem, Elem> trace_norm(const Elem& x) const;
  /// Absolute trace to F_p as a residue (identity for degree 1).
  Residue trace(const Elem& x) const noexcept;
  Residue norm(const Elem& x) const noexcept;

  /// Multiplicative order via the factored group order; throws ZeroElement.
  std::uint64_t mult_order(const Elem& x) const;

  bool is_square(const Elem& x) const noexcept;
  std::optional<Elem> sqrt(const Elem& x) const;

  /// Dense index in [0, q): c0 + p*c1.
  std::uint64_t index(const Elem& x) const noexcept { return x.c0 + d_->p * x.c1; }
  Elem element_at(std::uint64_t i) const noexcept { return {i % d_->p, i / d_->p}; }

  /// The degree-2 field over the same prime (self for degree 2).
  Field quadratic_extension() const;
  Field prime_field() const;

 private:
  struct Data {
    std::uint64_t p = 0;
    int degree = 1;
    std::uint64_t q = 0;
    Residue r = 0;
    std::vector<PrimePower> factorization;
    Elem primitive_root;
  };

  explicit Field(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  Residue mulmod(Residue a, Residue b) const noexcept { return (a * b) % d_->p; }

  std::shared_ptr<const Data> d_;
};

/// Cyclic subgroup of F_q^* given by a generator and its exact order.
struct SubgroupSpec {
  Field field;
  Elem generator;
  std::uint64_t order = 0;
};

/// Subgroup generated by `g`; throws ZeroElement for g = 0.
SubgroupSpec subgroup_generated_by(const Field& f, const Elem& g);
/// The unique subgroup of order d | q - 1; throws InvalidArgument otherwise.
SubgroupSpec subgroup_of_order(const Field& f, std::uint64_t d);
/// The norm-one subgroup of F_{p^2}^* (order p + 1); throws WrongDegree.
SubgroupSpec norm_subgroup(const Field& f);
/// Checks generator^order = 1 and minimality.
bool is_valid(const SubgroupSpec& g);

struct CharacterSpec {
  Field field;
  Elem alpha;
};

/// Additive character z -> e_p(Tr(alpha*z)) with a precomputed table of
/// p-th roots of unity.
class Character {
 public:
  /// Throws ZeroElement for alpha = 0.
  Character(Field f, Elem alpha);
  explicit Character(const CharacterSpec& spec) : Character(spec.field, spec.alpha) {}

  const Field& field() const noexcept { return field_; }
  const Elem& alpha() const noexcept { return alpha_; }
  CharacterSpec spec() const { return {field_, alpha_}; }

  std::complex<double> operator()(const Elem& z) const noexcept {
    return (*roots_)[field_.trace(field_.mul(alpha_, z))];
  }
  /// e_p(k) for a residue k.
  std::complex<double> root(Residue k) const noexcept { return (*roots_)[k % field_.p()]; }

 private:
  Field field_;
  Elem alpha_;
  std::shared_ptr<const std::vector<std::complex<double>>> roots_;
};

std::complex<double> char_eval(const Character& chi, const Elem& z);

}  // namespace matpow::ff
