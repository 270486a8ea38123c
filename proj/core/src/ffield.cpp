#include "matpow/ffield.hpp"

#include <cmath>
#include <numbers>

#include "matpow/error.hpp"

namespace matpow::ff {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<PrimePower> factorize(std::uint64_t n) {
  std::vector<PrimePower> out;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.push_back({d, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

std::uint64_t lcm(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a / gcd(a, b), b, &out)) {
    throw Error(ErrorCode::OutOfRange, "lcm overflows 64 bits");
  }
  return out;
}

Field Field::make(std::uint64_t p, int degree) {
  if (degree != 1 && degree != 2) {
    throw Error(ErrorCode::WrongDegree, "degree must be 1 or 2, got " + std::to_string(degree));
  }
  if (p == 2) throw Error(ErrorCode::InvalidArgument, "p = 2 is not supported (odd characteristic only)");
  if (!is_prime(p)) throw Error(ErrorCode::CompositeModulus, std::to_string(p) + " is not prime");
  if (p > kMaxPrime) throw Error(ErrorCode::OutOfRange, "p exceeds " + std::to_string(kMaxPrime));

  auto d = std::make_shared<Data>();
  d->p = p;
  d->degree = degree;
  d->q = degree == 1 ? p : p * p;
  // Euler's criterion on 2, 3, ...; the least non-residue is small.
  auto powmod = [p](Residue b, std::uint64_t e) {
    Residue r = 1;
    b %= p;
    while (e != 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  for (Residue r = 2; r < p; ++r) {
    if (powmod(r, (p - 1) / 2) == p - 1) {
      d->r = r;
      break;
    }
  }
  d->factorization = factorize(d->q - 1);

  Field f(d);
  for (std::uint64_t i = 2; i < d->q; ++i) {
    const Elem g = f.element_at(i);
    bool primitive = true;
    for (const auto& pp : d->factorization) {
      if (f.pow(g, (d->q - 1) / pp.prime) == f.one()) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      d->primitive_root = g;
      break;
    }
  }
  return f;
}

Elem Field::from_int(std::int64_t v) const noexcept {
  const auto p = static_cast<std::int64_t>(d_->p);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return {static_cast<Residue>(r), 0};
}

Elem Field::element(std::int64_t c0, std::int64_t c1) const {
  const Elem a = from_int(c0);
  const Elem b = from_int(c1);
  if (d_->degree == 1 && b.c0 != 0) {
    throw Error(ErrorCode::WrongDegree, "w-coordinate in a prime field");
  }
  return {a.c0, b.c0};
}

bool Field::contains(const Elem& x) const noexcept {
  return x.c0 < d_->p && x.c1 < d_->p && (d_->degree == 2 || x.c1 == 0);
}

Elem Field::add(const Elem& x, const Elem& y) const noexcept {
  const auto p = d_->p;
  Residue a = x.c0 + y.c0;
  Residue b = x.c1 + y.c1;
  return {a >= p ? a - p : a, b >= p ? b - p : b};
}

Elem Field::sub(const Elem& x, const Elem& y) const noexcept {
  const auto p = d_->p;
  return {x.c0 >= y.c0 ? x.c0 - y.c0 : x.c0 + p - y.c0, x.c1 >= y.c1 ? x.c1 - y.c1 : x.c1 + p - y.c1};
}

Elem Field::neg(const Elem& x) const noexcept { return sub(zero(), x); }

Elem Field::mul(const Elem& x, const Elem& y) const noexcept {
  if (d_->degree == 1) return {mulmod(x.c0, y.c0), 0};
  const auto p = d_->p;
  // (x0 + x1 w)(y0 + y1 w) = x0 y0 + r x1 y1 + (x0 y1 + x1 y0) w
  const Residue c0 = (mulmod(x.c0, y.c0) + mulmod(d_->r, mulmod(x.c1, y.c1))) % p;
  const Residue c1 = (mulmod(x.c0, y.c1) + mulmod(x.c1, y.c0)) % p;
  return {c0, c1};
}

Elem Field::pow(Elem x, std::uint64_t e) const noexcept {
  Elem r = one();
  while (e != 0) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

Elem Field::inv(const Elem& x) const {
  if (x == zero()) throw Error(ErrorCode::ZeroElement, "inverse of zero");
  return pow(x, d_->q - 2);
}

Elem Field::frobenius(const Elem& x) const noexcept {
  // w^p = w * r^((p-1)/2) = -w
  if (d_->degree == 1) return x;
  return {x.c0, x.c1 == 0 ? 0 : d_->p - x.c1};
}

std::pair<Elem, Elem> Field::trace_norm(const Elem& x) const {
  if (d_->degree != 2) throw Error(ErrorCode::WrongDegree, "trace/norm need a quadratic extension");
  const Elem xp = frobenius(x);
  return {add(x, xp), mul(x, xp)};
}

Residue Field::trace(const Elem& x) const noexcept {
  if (d_->degree == 1) return x.c0;
  const Residue t = 2 * x.c0;
  return t >= d_->p ? t - d_->p : t;
}

Residue Field::norm(const Elem& x) const noexcept {
  if (d_->degree == 1) return x.c0;
  return mul(x, frobenius(x)).c0;
}

std::uint64_t Field::mult_order(const Elem& x) const {
  if (x == zero()) throw Error(ErrorCode::ZeroElement, "order of zero");
  return order_from_factorization(group_order(), d_->factorization,
                                  [&](std::uint64_t e) { return pow(x, e) == one(); });
}

bool Field::is_square(const Elem& x) const noexcept {
  if (x == zero()) return true;
  return pow(x, (d_->q - 1) / 2) == one();
}

std::optional<Elem> Field::sqrt(const Elem& x) const {
  if (x == zero()) return zero();
  if (!is_square(x)) return std::nullopt;
  // Tonelli-Shanks in a cyclic group of order q - 1 = 2^s * m.
  std::uint64_t m = d_->q - 1;
  int s = 0;
  while (m % 2 == 0) {
    m /= 2;
    ++s;
  }
  Elem z;
  for (std::uint64_t i = 2; i < d_->q; ++i) {
    z = element_at(i);
    if (!is_square(z)) break;
  }
  Elem c = pow(z, m);
  Elem t = pow(x, m);
  Elem r = pow(x, (m + 1) / 2);
  int big_m = s;
  while (t != one()) {
    int i = 0;
    Elem tt = t;
    while (tt != one()) {
      tt = mul(tt, tt);
      ++i;
    }
    Elem b = c;
    for (int j = 0; j < big_m - i - 1; ++j) b = mul(b, b);
    big_m = i;
    c = mul(b, b);
    t = mul(t, c);
    r = mul(r, b);
  }
  return r;
}

Field Field::quadratic_extension() const {
  if (d_->degree == 2) return *this;
  return make(d_->p, 2);
}

Field Field::prime_field() const {
  if (d_->degree == 1) return *this;
  return make(d_->p, 1);
}

SubgroupSpec subgroup_generated_by(const Field& f, const Elem& g) {
  return {f, g, f.mult_order(g)};
}

SubgroupSpec subgroup_of_order(const Field& f, std::uint64_t d) {
  if (d == 0 || f.group_order() % d != 0) {
    throw Error(ErrorCode::InvalidArgument, std::to_string(d) + " does not divide q - 1");
  }
  return {f, f.pow(f.primitive_root(), f.group_order() / d), d};
}

SubgroupSpec norm_subgroup(const Field& f) {
  if (f.degree() != 2) throw Error(ErrorCode::WrongDegree, "norm subgroup needs F_{p^2}");
  return {f, f.pow(f.primitive_root(), f.p() - 1), f.p() + 1};
}

bool is_valid(const SubgroupSpec& g) {
  if (g.order == 0 || g.generator == g.field.zero()) return false;
  if (g.field.pow(g.generator, g.order) != g.field.one()) return false;
  for (const auto& pp : factorize(g.order)) {
    if (g.field.pow(g.generator, g.order / pp.prime) == g.field.one()) return false;
  }
  return true;
}

namespace {

std::shared_ptr<const std::vector<std::complex<double>>> roots_of_unity(std::uint64_t p) {
  auto table = std::make_shared<std::vector<std::complex<double>>>(p);
  for (std::uint64_t k = 0; k < p; ++k) {
    const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k) /
                              static_cast<long double>(p);
    (*table)[k] = {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }
  return table;
}

}  // namespace

Character::Character(Field f, Elem alpha) : field_(std::move(f)), alpha_(alpha) {
  if (alpha_ == field_.zero()) throw Error(ErrorCode::ZeroElement, "character with alpha = 0 is trivial");
  roots_ = roots_of_unity(field_.p());
}

std::complex<double> char_eval(const Character& chi, const Elem& z) { return chi(z); }

}  // namespace matpow::ff
