#include "matpow/budget.hpp"

#include <cstdlib>
#include <string>

namespace matpow {

std::optional<double> budget_env_override() {
  const char* raw = std::getenv("MATPOW_BUDGET");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != std::string(raw).size() || !(v > 0)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Budget Budget::from_env() {
  if (auto cap = budget_env_override()) return defaults().with_uniform_cap(*cap);
  return defaults();
}

Budget Budget::with_uniform_cap(double cap) const {
  Budget b = *this;
  b.q2 = b.q3 = b.orbit = b.sumset = b.cover_space = b.product_eq = b.exp_sum = b.moment = b.points = cap;
  return b;
}

}  // namespace matpow
