#include "matpow/charsums.hpp"

#include <cmath>
#include <limits>

#include "matpow/counting.hpp"
#include "matpow/error.hpp"

namespace matpow::sums {

namespace {

void check_budget(const char* op, double estimated, double cap) {
  if (estimated > cap) throw BudgetError(op, estimated, cap);
}

SumResult finish(const ComplexAccumulator& acc, std::uint64_t length, const CharacterSpec& chi) {
  const std::complex<double> v = acc.value();
  return {v, std::abs(v), length, chi};
}

void require_field(const Field& a, const Field& b) {
  if (!(a == b)) throw Error(ErrorCode::FieldMismatch, "character and data live in different fields");
}

BoundEntry report_entry(std::string name, std::string formula, double value, double observed) {
  return {std::move(name), std::move(formula), value, "report", value > 0 ? observed / value : 0.0};
}

BoundEntry checked_entry(std::string name, std::string formula, double value, double observed) {
  const bool ok = observed <= value * (1.0 + 1e-9) + 1e-9;
  return {std::move(name), std::move(formula), value, ok ? "pass" : "fail", value > 0 ? observed / value : 0.0};
}

double split_pair_bound(double tau, double p) {
  return std::min(std::pow(tau, 23.0 / 36.0) * std::pow(p, 1.0 / 6.0), std::pow(tau, 20.0 / 27.0) * std::pow(p, 1.0 / 9.0));
}

double nonsplit_pair_bound(double tau, double p) {
  return std::min({std::pow(tau, 0.5) * std::pow(p, 0.25), std::pow(tau, 13.0 / 20.0) * std::pow(p, 1.0 / 6.0),
                   std::pow(tau, 34.0 / 45.0) * std::pow(p, 1.0 / 9.0)});
}

constexpr const char* kSplitPairFormula = "min{tau^(23/36) p^(1/6), tau^(20/27) p^(1/9)}";
constexpr const char* kNonsplitPairFormula = "min{tau^(1/2) p^(1/4), tau^(13/20) p^(1/6), tau^(34/45) p^(1/9)}";

bool orbit_injective(const Vec& v, const MatEntity& m) {
  // The orbit x -> v A^x is periodic; it is injective on [1, tau] iff the
  // first return to v happens at tau.
  Vec cur = v;
  for (std::uint64_t x = 1; x < m.tau(); ++x) {
    cur = v.orientation == mat::Orientation::Row ? cur * m.matrix() : m.matrix() * cur;
    if (cur.entries == v.entries) return false;
  }
  return true;
}

}  // namespace

SumResult matrix_exp_sum(const Vec& a, const Vec& b, const MatEntity& m, const CharacterSpec& chi,
                         const Budget& budget) {
  require_field(chi.field, m.field());
  if (!(a.field == m.field()) || !(b.field == m.field())) {
    throw Error(ErrorCode::FieldMismatch, "vectors and matrix live in different fields");
  }
  if (a.n() != m.n() || b.n() != m.n()) throw Error(ErrorCode::InvalidArgument, "vector length mismatch");
  check_budget("matrix_exp_sum", static_cast<double>(m.tau()), budget.exp_sum);
  const ff::Character psi(chi);
  const Vec row{a.field, a.entries, mat::Orientation::Row};
  Vec w{b.field, b.entries, mat::Orientation::Column};
  ComplexAccumulator acc;
  for (std::uint64_t x = 1; x <= m.tau(); ++x) {
    w = m.matrix() * w;
    acc.add(psi(mat::dot(row, w)));
  }
  return finish(acc, m.tau(), chi);
}

SumResult kloosterman_subgroup(const SubgroupSpec& g, const Elem& a, const Elem& b, const CharacterSpec& chi,
                               const Budget& budget) {
  require_field(chi.field, g.field);
  check_budget("kloosterman_subgroup", static_cast<double>(g.order), budget.exp_sum);
  const Field& f = g.field;
  const ff::Character psi(chi);
  const Elem g_inv = f.inv(g.generator);
  Elem u = f.one();
  Elem v = f.one();
  ComplexAccumulator acc;
  for (std::uint64_t j = 0; j < g.order; ++j) {
    acc.add(psi(f.add(f.mul(a, u), f.mul(b, v))));
    u = f.mul(u, g.generator);
    v = f.mul(v, g_inv);
  }
  return finish(acc, g.order, chi);
}

SumResult gauss_subgroup(const SubgroupSpec& g, const Elem& a, const CharacterSpec& chi, const Budget& budget) {
  require_field(chi.field, g.field);
  check_budget("gauss_subgroup", static_cast<double>(g.order), budget.exp_sum);
  const Field& f = g.field;
  const ff::Character psi(chi);
  Elem u = f.one();
  ComplexAccumulator acc;
  for (std::uint64_t j = 0; j < g.order; ++j) {
    acc.add(psi(f.mul(a, u)));
    u = f.mul(u, g.generator);
  }
  return finish(acc, g.order, chi);
}

std::string to_string(Family f) { return f == Family::Kloosterman ? "kloosterman" : "gauss"; }

MomentResult sum_moment(Family family, const SubgroupSpec& g, int m, const Budget& budget) {
  if (m <= 0 || m % 2 != 0) throw Error(ErrorCode::InvalidArgument, "moment order must be even and positive");
  const Field& f = g.field;
  const std::uint64_t q = f.size();
  const std::uint64_t p = f.p();
  const double params = family == Family::Kloosterman ? static_cast<double>(q) * static_cast<double>(q)
                                                      : static_cast<double>(q);
  check_budget("sum_moment", params * static_cast<double>(g.order), budget.moment);

  // Tr(c u) = c0 Tr(u) + c1 Tr(w u) for c = c0 + c1 w: the trace is linear in
  // the parameter coordinates, so each term is a table lookup.
  const Elem w = f.degree() == 2 ? f.element(0, 1) : f.zero();
  std::vector<std::uint64_t> tu0, tu1, tv0, tv1;
  tu0.reserve(g.order);
  const Elem g_inv = f.inv(g.generator);
  Elem u = f.one();
  Elem v = f.one();
  for (std::uint64_t j = 0; j < g.order; ++j) {
    tu0.push_back(f.trace(u));
    tu1.push_back(f.degree() == 2 ? f.trace(f.mul(w, u)) : 0);
    tv0.push_back(f.trace(v));
    tv1.push_back(f.degree() == 2 ? f.trace(f.mul(w, v)) : 0);
    u = f.mul(u, g.generator);
    v = f.mul(v, g_inv);
  }
  const ff::Character psi(f, f.one());
  const int half = m / 2;

  ComplexAccumulator total;
  auto add_power = [&](std::complex<double> s) {
    const double n2 = std::norm(s);
    double r = 1.0;
    for (int i = 0; i < half; ++i) r *= n2;
    total.add({r, 0.0});
  };
  const std::uint64_t p1 = f.degree() == 2 ? p : 1;
  if (family == Family::Gauss) {
    for (std::uint64_t a0 = 0; a0 < p; ++a0) {
      for (std::uint64_t a1 = 0; a1 < p1; ++a1) {
        ComplexAccumulator s;
        for (std::uint64_t j = 0; j < g.order; ++j) s.add(psi.root(a0 * tu0[j] + a1 * tu1[j]));
        add_power(s.value());
      }
    }
  } else {
    for (std::uint64_t a0 = 0; a0 < p; ++a0) {
      for (std::uint64_t a1 = 0; a1 < p1; ++a1) {
        std::vector<std::uint64_t> ta(g.order);
        for (std::uint64_t j = 0; j < g.order; ++j) ta[j] = (a0 * tu0[j] + a1 * tu1[j]) % p;
        for (std::uint64_t b0 = 0; b0 < p; ++b0) {
          for (std::uint64_t b1 = 0; b1 < p1; ++b1) {
            ComplexAccumulator s;
            for (std::uint64_t j = 0; j < g.order; ++j) s.add(psi.root(ta[j] + b0 * tv0[j] + b1 * tv1[j]));
            add_power(s.value());
          }
        }
      }
    }
  }

  MomentResult out;
  out.numeric = total.value().real();
  out.parameters = static_cast<std::uint64_t>(params);
  if (half <= 3) {
    try {
      const mat::Matrix d = family == Family::Kloosterman ? mat::Matrix::diagonal(f, {g.generator, g_inv})
                                                          : mat::Matrix::diagonal(f, {g.generator});
      const MatEntity ent(d);
      const auto c = count::count_Q(ent, half, budget);
      out.solution_count = c.value;
      out.exact = params * static_cast<double>(c.value);
    } catch (const BudgetError&) {
      // the numeric value stands alone
    }
  }
  return out;
}

std::uint64_t kappa_denominator(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  const int m = (n - 1) / 2;
  // floor(n - m/2) = n - ceil(m/2)
  const int inner = n - (m + 1) / 2;
  return 4ull * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(inner);
}

double kappa(int n) { return 1.0 / static_cast<double>(kappa_denominator(n)); }

Hypotheses hypotheses_for(const Vec& a, const Vec& b, const MatEntity& m) {
  Hypotheses h;
  h.n = m.n();
  h.p = m.field().p();
  h.q = m.field().size();
  h.diagonalizable = m.diagonalizable().value_or(false);
  if (m.factorization()) {
    h.irreducible = m.factorization()->tag == mat::FactorTag::Irreducible;
    h.split = m.factorization()->tag == mat::FactorTag::Split;
  }
  h.in_sl = m.in_sl();
  h.nonzero_vectors = !a.is_zero() && !b.is_zero();
  if (h.nonzero_vectors) {
    const Vec row{a.field, a.entries, mat::Orientation::Row};
    const Vec col{b.field, b.entries, mat::Orientation::Column};
    h.independent_a = mat::independence_check(row, m.matrix());
    h.independent_b = mat::independence_check(col, m.matrix());
    h.independent_a_ext = mat::independence_check_extended(row, m.matrix());
    h.independent_b_ext = mat::independence_check_extended(col, m.matrix());
    h.orbits_injective = orbit_injective(row, m) && orbit_injective(col, m);
  }
  return h;
}

const BoundEntry* BoundReport::find(const std::string& name) const {
  for (const auto& b : bounds) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

BoundReport evaluate_bounds(const SumResult& s, const MatEntity& m, const Hypotheses& h) {
  BoundReport r;
  r.observed = s.abs;
  r.n = m.n();
  r.tau = m.tau();
  r.t = m.t();
  r.q = m.field().size();
  r.kappa = kappa(r.n);
  const double tau = static_cast<double>(r.tau);
  const double t = static_cast<double>(r.t);
  const double q = static_cast<double>(r.q);
  const double n = r.n;
  const double half_power = std::pow(q, n / 2.0);
  const bool large = tau > half_power;

  r.bounds.push_back(checked_entry("trivial", "tau", tau, s.abs));
  if (h.orbits_injective) r.bounds.push_back(checked_entry("korobov", "q^(n/2)", half_power, s.abs));

  auto general = [&](double saving) {
    return large ? std::pow(t, 0.25) * std::pow(tau, 0.5 - saving) * std::pow(q, n / 4.0)
                 : std::pow(t, 0.25) * std::pow(tau, 0.75 - saving) * std::pow(q, n / 8.0);
  };
  const char* branch_large = "t^(1/4) tau^(1/2-k) q^(n/4)";
  const char* branch_small = "t^(1/4) tau^(3/4-k) q^(n/8)";
  if (h.diagonalizable && h.independent_a && h.independent_b) {
    r.bounds.push_back(report_entry("diagonalizable_sum", std::string(large ? branch_large : branch_small) + ", k=kappa_n",
                                    general(r.kappa), s.abs));
  }
  if (h.irreducible && h.nonzero_vectors) {
    r.bounds.push_back(report_entry("irreducible_sum", std::string(large ? branch_large : branch_small) + ", k=1/(4n)",
                                    general(1.0 / (4.0 * n)), s.abs));
  }
  const bool sl2_prime = r.n == 2 && r.q == h.p && h.in_sl && h.diagonalizable;
  const double p = static_cast<double>(h.p);
  if (sl2_prime && h.split && h.independent_a && h.independent_b) {
    r.bounds.push_back(report_entry("sl2_split_sum", kSplitPairFormula, split_pair_bound(tau, p), s.abs));
  }
  if (sl2_prime && h.irreducible && h.independent_a_ext && h.independent_b_ext) {
    r.bounds.push_back(report_entry("sl2_nonsplit_sum", kNonsplitPairFormula, nonsplit_pair_bound(tau, p), s.abs));
  }
  return r;
}

BoundReport kloosterman_bounds(const SumResult& s, const SubgroupSpec& g, const Elem& a, const Elem& b) {
  BoundReport r;
  const Field& f = g.field;
  r.observed = s.abs;
  r.n = 2;
  r.tau = g.order;
  r.t = 1;
  r.q = f.size();
  r.kappa = kappa(2);
  const double tau = static_cast<double>(g.order);
  const double p = static_cast<double>(f.p());
  r.bounds.push_back(checked_entry("trivial", "tau", tau, s.abs));
  const bool nonzero = a != f.zero() && b != f.zero();
  if (f.degree() == 1 && nonzero) {
    if (g.order == f.group_order()) {
      r.bounds.push_back(checked_entry("kloosterman_weil", "2 sqrt(p)", 2.0 * std::sqrt(p), s.abs));
    }
    r.bounds.push_back(report_entry("kloosterman_subgroup", kSplitPairFormula, split_pair_bound(tau, p), s.abs));
  }
  return r;
}

BoundReport gauss_bounds(const SumResult& s, const SubgroupSpec& g, const Elem& a) {
  BoundReport r;
  const Field& f = g.field;
  r.observed = s.abs;
  r.n = 2;
  r.tau = g.order;
  r.t = 1;
  r.q = f.size();
  r.kappa = kappa(2);
  const double tau = static_cast<double>(g.order);
  r.bounds.push_back(checked_entry("trivial", "tau", tau, s.abs));
  if (f.degree() == 2 && a != f.zero() && (f.p() + 1) % g.order == 0) {
    r.bounds.push_back(report_entry("gauss_norm_subgroup", kNonsplitPairFormula,
                                    nonsplit_pair_bound(tau, static_cast<double>(f.p())), s.abs));
  }
  return r;
}

HolderCheck holder_check(double abs_s, std::uint64_t q, int n, std::uint64_t tau, int k, int l, std::uint64_t jk,
                         std::uint64_t kl) {
  HolderCheck h;
  h.k = k;
  h.l = l;
  const double e = 2.0 * k * l;
  h.log_lhs = abs_s > 0 ? e * std::log(abs_s) : -std::numeric_limits<double>::infinity();
  h.log_rhs = n * std::log(static_cast<double>(q)) + (e - 2.0 * k - 2.0 * l) * std::log(static_cast<double>(tau)) +
              std::log(static_cast<double>(jk)) + std::log(static_cast<double>(kl));
  h.holds = h.log_lhs <= h.log_rhs + std::log1p(1e-6);
  return h;
}

}  // namespace matpow::sums
