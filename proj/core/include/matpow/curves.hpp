#pragma once

// The plane curve F(X,Y) = (X^s + Y^s + a)(X^s + Y^s + b X^s Y^s) - X^s Y^s:
// evaluation, affine point counts and the linear-factor exclusion for s = 1.

#include <cstdint>
#include <string>
#include <vector>

#include "matpow/budget.hpp"
#include "matpow/counting.hpp"
#include "matpow/ffield.hpp"

namespace matpow::curves {

using ff::Elem;
using ff::Field;

struct CurveSpec {
  Field field;
  std::uint64_t s = 1;
  Elem a;
  Elem b;

  std::uint64_t degree() const noexcept { return 3 * s; }
};

/// Validates ab(ab - 1) != 0 (DegenerateParameters) and s >= 1 with
/// gcd(s, p) = 1 (InvalidArgument).
CurveSpec make_curve(const Field& f, std::uint64_t s, const Elem& a, const Elem& b);

Elem curve_eval(const CurveSpec& c, const Elem& x, const Elem& y);

/// #{(x, y) in F_q^2 : F(x, y) = 0}; affine points only. Throws BudgetError
/// (q^2 against budget.points).
count::CountResult count_points(const CurveSpec& c, const Budget& budget = Budget::from_env());

/// 4 d^{4/3} p^{2/3}, valid for absolutely irreducible curves of degree d < p
/// over F_p.
double high_degree_point_bound(std::uint64_t d, std::uint64_t p);

/// s^{6/5} p^{8/5} + p^3 (the shape of the F_{p^2} bound for s = k(p - 1),
/// known only up to a constant).
double extension_point_bound_shape(std::uint64_t s, std::uint64_t p);

enum class LineShape { XMinusC, YMinusC, XPlusYMinusC };
std::string to_string(LineShape s);

/// For a line L = 0 and the cubic F (s = 1), the restriction F|_L as a
/// polynomial in one variable; L divides F iff every coefficient vanishes.
struct Restriction {
  LineShape shape = LineShape::XMinusC;
  Elem c;
  std::vector<Elem> coeffs;  // low degree first
};

Restriction restrict_to_line(const Field& f, const Elem& a, const Elem& b, LineShape shape, const Elem& c);

struct LineWitness {
  LineShape shape = LineShape::XMinusC;
  Elem c;
  int degree = 0;      // a coefficient of F|_L that does not vanish
  Elem coefficient;
};

struct ExclusionReport {
  bool excluded = false;
  std::uint64_t lines_checked = 0;
  /// One witness per line whose restriction has a vanishing leading or
  /// constant coefficient (the candidates a factor would have to come from).
  std::vector<LineWitness> candidates;
};

/// Checks that none of X - c, Y - c, X + Y - c divides F for s = 1 over every
/// c in F_q. The coefficients that would have to vanish (bc + 1 for the
/// first two shapes, c(a + c) for the third) have all their roots in F_q, so
/// the scan also covers lines over the algebraic closure.
/// Throws DegenerateParameters when ab(ab - 1) = 0.
ExclusionReport cubic_factor_exclusion(const Field& f, const Elem& a, const Elem& b);

}  // namespace matpow::curves
