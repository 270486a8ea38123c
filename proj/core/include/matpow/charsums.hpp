#pragma once

// Matrix exponential sums, Kloosterman and Gauss sums over multiplicative
// subgroups, their even moments, and numeric evaluation of the known upper
// bounds for them.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matpow/budget.hpp"
#include "matpow/ffield.hpp"
#include "matpow/matgrp.hpp"

namespace matpow::sums {

using ff::CharacterSpec;
using ff::Elem;
using ff::Field;
using ff::SubgroupSpec;
using mat::MatEntity;
using mat::Vec;

struct SumResult {
  std::complex<double> value;
  double abs = 0.0;
  std::uint64_t length = 0;
  CharacterSpec character;
};

/// Complex Neumaier (compensated) accumulator.
class ComplexAccumulator {
 public:
  void add(std::complex<double> z) noexcept {
    add_part(re_, re_c_, z.real());
    add_part(im_, im_c_, z.imag());
  }
  std::complex<double> value() const noexcept { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& s, double& c, double x) noexcept {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

/// sum_{x=1}^{tau} psi(a A^x b) with a a row vector and b a column vector.
/// Throws BudgetError (tau against budget.exp_sum), FieldMismatch.
SumResult matrix_exp_sum(const Vec& a, const Vec& b, const MatEntity& m, const CharacterSpec& chi,
                         const Budget& budget = Budget::from_env());

/// sum_{u in G} psi(a u + b u^{-1}).
SumResult kloosterman_subgroup(const SubgroupSpec& g, const Elem& a, const Elem& b, const CharacterSpec& chi,
                               const Budget& budget = Budget::from_env());

/// sum_{u in G} psi(a u).
SumResult gauss_subgroup(const SubgroupSpec& g, const Elem& a, const CharacterSpec& chi,
                         const Budget& budget = Budget::from_env());

enum class Family { Kloosterman, Gauss };
std::string to_string(Family f);

struct MomentResult {
  double numeric = 0.0;
  /// q^2 * Q_{m/2}(diag(g, g^{-1})) for Kloosterman, q * Q_{m/2}(g) for
  /// Gauss; present for m in {2, 4, 6}.
  std::optional<double> exact;
  std::optional<std::uint64_t> solution_count;
  std::uint64_t parameters = 0;  // q^2 or q
};

/// sum over all parameters (a, b) in F_q^2 (Kloosterman) or a in F_q (Gauss)
/// of |sum|^m, with psi(z) = e_p(Tr(z)). Throws BudgetError (moment loop
/// against budget.moment), InvalidArgument for odd or non-positive m.
MomentResult sum_moment(Family family, const SubgroupSpec& g, int m, const Budget& budget = Budget::from_env());

/// 1 / (4n * floor(n - floor((n-1)/2) / 2)).
double kappa(int n);
/// The integer denominator of kappa(n).
std::uint64_t kappa_denominator(int n);

struct Hypotheses {
  int n = 0;
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  bool diagonalizable = false;
  bool irreducible = false;         // characteristic polynomial irreducible over F_q
  bool split = false;               // all eigenvalues in F_q
  bool in_sl = false;
  bool independent_a = false;       // a, aA, ..., aA^{n-1} over F_q
  bool independent_b = false;
  bool independent_a_ext = false;   // the same over the quadratic extension
  bool independent_b_ext = false;
  bool orbits_injective = false;    // x -> aA^x and x -> A^x b both injective on [1, tau]
  bool nonzero_vectors = false;
};

Hypotheses hypotheses_for(const Vec& a, const Vec& b, const MatEntity& m);

struct BoundEntry {
  std::string name;
  std::string formula;
  double value = 0.0;
  std::string status;  // pass | fail | report
  double ratio = 0.0;  // observed / value
};

struct BoundReport {
  double observed = 0.0;
  std::vector<BoundEntry> bounds;
  double kappa = 0.0;
  std::uint64_t tau = 0;
  std::uint64_t t = 0;
  std::uint64_t q = 0;
  int n = 0;

  const BoundEntry* find(const std::string& name) const;
};

/// Every bound whose hypotheses hold. Only "trivial" (tau) and "korobov"
/// (q^{n/2}, when both orbits are injective) carry pass/fail statuses.
BoundReport evaluate_bounds(const SumResult& s, const MatEntity& m, const Hypotheses& h);

/// Subgroup-sum bounds: "kloosterman_weil" (2 sqrt(p), pass/fail, G = F_p^*,
/// ab != 0) and "kloosterman_subgroup" (report, G inside F_p^*).
BoundReport kloosterman_bounds(const SumResult& s, const SubgroupSpec& g, const Elem& a, const Elem& b);
/// "gauss_norm_subgroup" (report, G inside the norm subgroup of F_{p^2}).
BoundReport gauss_bounds(const SumResult& s, const SubgroupSpec& g, const Elem& a);

/// |S|^{2kl} <= q^n tau^{2kl-2k-2l} J_k K_l.
struct HolderCheck {
  int k = 0;
  int l = 0;
  double log_lhs = 0.0;  // natural logarithms of both sides
  double log_rhs = 0.0;
  bool holds = false;
};

/// Compares in logarithms with 1e-6 relative slack. J_k, K_l come from
/// count_JK on a (row) and b (column).
HolderCheck holder_check(double abs_s, std::uint64_t q, int n, std::uint64_t tau, int k, int l, std::uint64_t jk,
                         std::uint64_t kl);

}  // namespace matpow::sums
