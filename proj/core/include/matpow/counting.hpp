#pragma once

// Exact solution counts for additive equations in matrix and vector orbits.
//
// Every count is built from hash maps keyed by the canonical serialization
// of matrices or vectors (see key.hpp): the nu-fold sums of powers are
// accumulated as a convolution, never by enumerating 2*nu-tuples.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "matpow/budget.hpp"
#include "matpow/key.hpp"
#include "matpow/matgrp.hpp"

namespace matpow::count {

using ff::Elem;
using ff::Field;
using mat::MatEntity;
using mat::Matrix;
using mat::Vec;

enum class Method { Convolution, Naive, EigenvalueReduction, DirectScan };
std::string to_string(Method m);

struct CountResult {
  std::uint64_t value = 0;
  Method method = Method::Convolution;
  std::uint64_t tau = 0;
  std::string params;
};

using KeyCounts = std::unordered_map<PackedKey, std::uint64_t, PackedKeyHash>;

/// u -> number of k-tuples (x_1..x_k) in [1, tau]^k with sum of orbit
/// elements equal to u.
struct SumDistribution {
  int arity = 0;
  KeyCounts counts;
  std::uint64_t total = 0;  // tau^arity

  std::uint64_t square_sum() const;
  std::uint64_t at(const PackedKey& k) const;
};

/// Q_{nu,n,q}(A) for nu in 1..3: solutions of
/// A^{x_1}+...+A^{x_nu} = A^{y_1}+...+A^{y_nu} over a full period.
/// Throws BudgetError (tau^2 against budget.q2, tau^3 against budget.q3).
CountResult count_Q(const MatEntity& a, int nu, const Budget& budget = Budget::from_env());
inline CountResult additive_energy(const MatEntity& a, const Budget& budget = Budget::from_env()) {
  return count_Q(a, 2, budget);
}
inline CountResult count_F(const MatEntity& a, const Budget& budget = Budget::from_env()) {
  return count_Q(a, 3, budget);
}

/// The same quantity via the scalar system on the eigenvalues
/// lambda_i^{x_1} + ... = lambda_i^{y_1} + ... for all i. Requires a
/// diagonalizable matrix with available eigen data (InvalidArgument otherwise).
CountResult count_Q_by_eigenvalues(const MatEntity& a, int nu, const Budget& budget = Budget::from_env());

/// nu_k for the orbit {v A^x} (row v) or {A^x v} (column v).
/// Throws ZeroVector, BudgetError.
SumDistribution orbit_sum_distribution(const Vec& v, const MatEntity& a, int k,
                                       const Budget& budget = Budget::from_env());

/// J_k (row v) or K_k (column v): solutions of
/// v(A^{x_1}+...+A^{x_k} - A^{y_1} - ... - A^{y_k}) = 0, i.e. sum of nu_k^2.
CountResult count_JK(const Vec& v, const MatEntity& a, int k, const Budget& budget = Budget::from_env());

/// Number of x in [1, tau] with prod_j (xi_j - lambda_j^x) = xi_0, where tau is
/// the lcm of the orders of the lambdas. Throws ZeroXi1, ZeroLambda,
/// ZeroElement (xi_0 = 0), BudgetError.
CountResult count_product_eq(const Field& f, const Elem& xi0, const std::vector<Elem>& xis,
                             const std::vector<Elem>& lambdas, const Budget& budget = Budget::from_env());

struct CoverReport {
  std::uint64_t space = 0;             // q^n
  std::vector<std::uint64_t> missing;  // missing[k-1] = q^n - |k(aO)|
  std::optional<int> first_full;       // least k <= k_max with k(aO) = F_q^n
};

/// Iterated sumsets S_1 = {aA^x}, S_{k+1} = S_k + S_1. Throws BudgetError.
CoverReport sumset_cover(const Vec& a, const MatEntity& m, int k_max, const Budget& budget = Budget::from_env());

/// Elementwise sum of two keys over `f`.
PackedKey add_keys(const Field& f, const PackedKey& x, const PackedKey& y);

}  // namespace matpow::count
