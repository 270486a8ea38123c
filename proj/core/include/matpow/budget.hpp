#pragma once

#include <optional>
#include <string>

namespace matpow {

/// Work caps for the enumeration kernels. A "work unit" is one hash-map
/// update, one character evaluation or one polynomial evaluation, depending
/// on the operation.
struct Budget {
  double q2 = 3000.0 * 3000.0;          // count_Q with nu = 2 (tau <= 3000)
  double q3 = 400.0 * 400.0 * 400.0;    // count_Q with nu = 3 (tau <= 400)
  double orbit = 1e8;                   // orbit_sum_distribution
  double sumset = 2e9;                  // sumset_cover, summed over k
  double cover_space = 1e7;             // q^n for sumset_cover
  double product_eq = 1e5;              // lcm of lambda orders
  double exp_sum = 1e6;                 // terms of a single character sum
  double moment = 1e9;                  // sum_moment parameter loop
  double points = 1e8;                  // q^2 for count_points
  int max_quantum_dim = 512;            // eigenbasis

  static Budget defaults() { return Budget{}; }

  /// Overrides every work cap (not the quantum dimension) with the value
  /// of MATPOW_BUDGET when that variable is set to a positive number.
  static Budget from_env();

  Budget with_uniform_cap(double cap) const;
};

/// Parses MATPOW_BUDGET; nullopt if unset, empty or not a positive number.
std::optional<double> budget_env_override();

}  // namespace matpow
