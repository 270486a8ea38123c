#pragma once

#include <functional>
#include <string>
#include <vector>

#include "matpow/error.hpp"
#include "matpow/harness.hpp"
#include "matpow/prng.hpp"

namespace matpow::harness::detail {

/// The per-instance columns shared by every row an instance emits.
struct Context {
  std::string experiment;
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  int n = 0;
  std::string trace;
  std::string cls;
  std::uint64_t tau = 0;
  std::uint64_t t = 0;
};

Context context_for(const std::string& experiment, const mat::MatEntity& m, std::string trace, std::string cls);

Row measured(const Context& c, const std::string& quantity, double value);
Row measured_complex(const Context& c, const std::string& quantity, std::complex<double> value,
                     const std::string& bound_name, double bound, const std::string& status);
/// value <= bound (with 1e-9 relative slack) is pass, otherwise fail.
Row checked(const Context& c, const std::string& quantity, double value, const std::string& bound_name, double bound);
/// value >= bound is pass.
Row checked_lower(const Context& c, const std::string& quantity, double value, const std::string& bound_name,
                  double bound);
Row reported(const Context& c, const std::string& quantity, double value, const std::string& bound_name,
             double bound);
Row skipped(const Context& c, const BudgetError& e);
Row errored(const Context& c, const Error& e);

/// Runs `fn`, turning a budget overrun into a skipped row and any other
/// library error into an error row.
void guarded(std::vector<Row>& rows, const Context& c, const std::function<void()>& fn);

using Task = std::function<std::vector<Row>(Xorshift64Star&)>;

std::vector<Task> plan(const ExperimentConfig& cfg);

}  // namespace matpow::harness::detail
