#include "matpow/curves.hpp"

#include <cmath>

#include "matpow/error.hpp"

namespace matpow::curves {

namespace {

using Poly = std::vector<Elem>;

Poly poly_add(const Field& f, const Poly& x, const Poly& y) {
  Poly r(std::max(x.size(), y.size()), f.zero());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = f.add(r[i], x[i]);
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = f.add(r[i], y[i]);
  return r;
}

Poly poly_mul(const Field& f, const Poly& x, const Poly& y) {
  if (x.empty() || y.empty()) return {};
  Poly r(x.size() + y.size() - 1, f.zero());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(x[i], y[j]));
  }
  return r;
}

Poly poly_scale(const Field& f, const Poly& x, const Elem& c) {
  Poly r = x;
  for (auto& e : r) e = f.mul(e, c);
  return r;
}

void require_nondegenerate(const Field& f, const Elem& a, const Elem& b) {
  const Elem ab = f.mul(a, b);
  if (ab == f.zero() || ab == f.one()) {
    throw Error(ErrorCode::DegenerateParameters, "the curve needs ab(ab - 1) != 0");
  }
}

}  // namespace

CurveSpec make_curve(const Field& f, std::uint64_t s, const Elem& a, const Elem& b) {
  require_nondegenerate(f, a, b);
  if (s == 0 || s % f.p() == 0) throw Error(ErrorCode::InvalidArgument, "s must be positive and prime to p");
  return {f, s, a, b};
}

Elem curve_eval(const CurveSpec& c, const Elem& x, const Elem& y) {
  const Field& f = c.field;
  const Elem xs = f.pow(x, c.s);
  const Elem ys = f.pow(y, c.s);
  const Elem sum = f.add(xs, ys);
  const Elem prod = f.mul(xs, ys);
  return f.sub(f.mul(f.add(sum, c.a), f.add(sum, f.mul(c.b, prod))), prod);
}

count::CountResult count_points(const CurveSpec& c, const Budget& budget) {
  const Field& f = c.field;
  const std::uint64_t q = f.size();
  const double work = static_cast<double>(q) * static_cast<double>(q);
  if (work > budget.points) throw BudgetError("count_points", work, budget.points);

  std::vector<Elem> power(q);
  for (std::uint64_t i = 0; i < q; ++i) power[i] = f.pow(f.element_at(i), c.s);

  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < q; ++i) {
    const Elem xs = power[i];
    const Elem bx = f.mul(c.b, xs);
    for (std::uint64_t j = 0; j < q; ++j) {
      const Elem ys = power[j];
      const Elem sum = f.add(xs, ys);
      const Elem prod = f.mul(xs, ys);
      // (sum + a)(sum + b xs ys) = xs ys
      if (f.mul(f.add(sum, c.a), f.add(sum, f.mul(bx, ys))) == prod) ++count;
    }
  }
  return {count, count::Method::DirectScan, 0, "s=" + std::to_string(c.s)};
}

double high_degree_point_bound(std::uint64_t d, std::uint64_t p) {
  return 4.0 * std::pow(static_cast<double>(d), 4.0 / 3.0) * std::pow(static_cast<double>(p), 2.0 / 3.0);
}

double extension_point_bound_shape(std::uint64_t s, std::uint64_t p) {
  const double pd = static_cast<double>(p);
  return std::pow(static_cast<double>(s), 1.2) * std::pow(pd, 1.6) + pd * pd * pd;
}

std::string to_string(LineShape s) {
  switch (s) {
    case LineShape::XMinusC: return "X-c";
    case LineShape::YMinusC: return "Y-c";
    case LineShape::XPlusYMinusC: return "X+Y-c";
  }
  return "?";
}

Restriction restrict_to_line(const Field& f, const Elem& a, const Elem& b, LineShape shape, const Elem& c) {
  // Parametrize the line by T and substitute into (S + a)(S + bP) - P with
  // S = X + Y and P = XY.
  Poly x, y;
  switch (shape) {
    case LineShape::XMinusC:
      x = {c};
      y = {f.zero(), f.one()};
      break;
    case LineShape::YMinusC:
      x = {f.zero(), f.one()};
      y = {c};
      break;
    case LineShape::XPlusYMinusC:
      x = {f.zero(), f.one()};
      y = {c, f.neg(f.one())};
      break;
  }
  const Poly sum = poly_add(f, x, y);
  const Poly prod = poly_mul(f, x, y);
  const Poly lhs = poly_mul(f, poly_add(f, sum, {a}), poly_add(f, sum, poly_scale(f, prod, b)));
  Poly r = poly_add(f, lhs, poly_scale(f, prod, f.neg(f.one())));
  while (!r.empty() && r.back() == f.zero()) r.pop_back();
  return {shape, c, std::move(r)};
}

ExclusionReport cubic_factor_exclusion(const Field& f, const Elem& a, const Elem& b) {
  require_nondegenerate(f, a, b);
  ExclusionReport rep;
  rep.excluded = true;
  for (auto shape : {LineShape::XMinusC, LineShape::YMinusC, LineShape::XPlusYMinusC}) {
    for (std::uint64_t i = 0; i < f.size(); ++i) {
      const Elem c = f.element_at(i);
      const Restriction r = restrict_to_line(f, a, b, shape, c);
      ++rep.lines_checked;
      if (r.coeffs.empty()) {
        rep.excluded = false;
        continue;
      }
      // Full degree is 2 for every shape; a drop in degree or a vanishing
      // constant marks a candidate line.
      const bool candidate = r.coeffs.size() < 3 || r.coeffs[0] == f.zero();
      if (!candidate) continue;
      LineWitness w{shape, c, 0, f.zero()};
      for (std::size_t d = 0; d < r.coeffs.size(); ++d) {
        if (r.coeffs[d] != f.zero()) {
          w.degree = static_cast<int>(d);
          w.coefficient = r.coeffs[d];
          break;
        }
      }
      rep.candidates.push_back(w);
    }
  }
  return rep;
}

}  // namespace matpow::curves
