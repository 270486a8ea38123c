#include <doctest.h>

#include <numeric>

#include "matpow/curves.hpp"
#include "matpow/error.hpp"
#include "matpow/prng.hpp"
#include "oracles.hpp"

using namespace matpow;
using curves::LineShape;
using ff::Elem;
using ff::Field;

TEST_SUITE("curves") {
  TEST_CASE("evaluation matches the expansion oracle") {
    Xorshift64Star rng(2);
    for (std::int64_t p : {5, 7, 13}) {
      const Field f = Field::make(static_cast<std::uint64_t>(p), 1);
      for (std::uint64_t s : {1u, 2u, 3u}) {
        const auto c = curves::make_curve(f, s, f.element(3), f.element(4));
        for (int i = 0; i < 50; ++i) {
          const auto x = static_cast<std::int64_t>(rng.uniform(p)), y = static_cast<std::int64_t>(rng.uniform(p));
          const Elem v = curves::curve_eval(c, f.element(x), f.element(y));
          CHECK(static_cast<std::int64_t>(v.c0) == oracle::curve(x, y, 3, 4, s, p));
          CHECK(v == curves::curve_eval(c, f.element(y), f.element(x)));
        }
      }
      const auto c1 = curves::make_curve(f, 1, f.element(3), f.element(4));
      CHECK(curves::curve_eval(c1, f.zero(), f.neg(f.element(3))) == f.zero());
      CHECK(curves::curve_eval(c1, f.zero(), f.zero()) == f.zero());
    }
  }

  TEST_CASE("point counts match brute force") {
    for (std::int64_t p : {5, 7, 11}) {
      const Field f = Field::make(static_cast<std::uint64_t>(p), 1);
      for (std::uint64_t s = 1; s <= 3; ++s) {
        for (std::int64_t a = 1; a < p; ++a) {
          for (std::int64_t b = 1; b < p; b += 2) {
            if (oracle::md(a * b, p) == 1) continue;
            const auto c = curves::make_curve(f, s, f.element(a), f.element(b));
            CHECK(curves::count_points(c).value == oracle::naive_points(a, b, s, p));
          }
        }
      }
    }
  }

  TEST_CASE("s-th power fibers reconstruct the count") {
    for (std::int64_t p : {13, 19}) {
      const Field f = Field::make(static_cast<std::uint64_t>(p), 1);
      for (std::uint64_t s : {2u, 3u, 4u}) {
        // fib[w] = #{x : x^s = w}
        std::vector<std::uint64_t> fib(static_cast<std::size_t>(p), 0);
        for (std::int64_t x = 0; x < p; ++x) ++fib[static_cast<std::size_t>(oracle::powmod(x, s, p))];
        for (std::int64_t w = 1; w < p; ++w) {
          const auto g = static_cast<std::uint64_t>(std::gcd<std::int64_t>(static_cast<std::int64_t>(s), p - 1));
          CHECK((fib[static_cast<std::size_t>(w)] == 0 || fib[static_cast<std::size_t>(w)] == g));
        }
        const std::int64_t a = 3, b = 5;
        std::uint64_t want = 0;
        for (std::int64_t u = 0; u < p; ++u) {
          for (std::int64_t w = 0; w < p; ++w) {
            if (oracle::curve(u, w, a, b, 1, p) == 0) want += fib[static_cast<std::size_t>(u)] * fib[static_cast<std::size_t>(w)];
          }
        }
        CHECK(curves::count_points(curves::make_curve(f, s, f.element(a), f.element(b))).value == want);
      }
    }
  }

  TEST_CASE("counts over F_{p^2}") {
    const std::int64_t p = 5;
    const Field f = Field::make(5, 2);
    const oracle::Fp2 o(p);
    const Elem a = f.element(1, 2), b = f.element(3, 1);
    for (std::uint64_t s : {1u, 4u, 8u}) {
      std::uint64_t want = 0;
      for (std::uint64_t i = 0; i < 25; ++i) {
        for (std::uint64_t j = 0; j < 25; ++j) {
          const oracle::Fp2::E x{static_cast<std::int64_t>(i % 5), static_cast<std::int64_t>(i / 5)};
          const oracle::Fp2::E y{static_cast<std::int64_t>(j % 5), static_cast<std::int64_t>(j / 5)};
          const auto xs = o.pw(x, s), ys = o.pw(y, s);
          const oracle::Fp2::E sum{oracle::md(xs[0] + ys[0], p), oracle::md(xs[1] + ys[1], p)};
          const oracle::Fp2::E l{oracle::md(sum[0] + 1, p), oracle::md(sum[1] + 2, p)};
          const auto bxy = o.mul(o.mul({3, 1}, xs), ys);
          const oracle::Fp2::E r{oracle::md(sum[0] + bxy[0], p), oracle::md(sum[1] + bxy[1], p)};
          const auto lr = o.mul(l, r), xy = o.mul(xs, ys);
          want += oracle::md(lr[0] - xy[0], p) == 0 && oracle::md(lr[1] - xy[1], p) == 0;
        }
      }
      CHECK(curves::count_points(curves::make_curve(f, s, a, b)).value == want);
    }
  }

  TEST_CASE("explicit point bound") {
    for (std::uint64_t p : {11u, 17u, 31u}) {
      const Field f = Field::make(p, 1);
      for (std::uint64_t s = 1; 3 * s < p; ++s) {
        const double bound = curves::high_degree_point_bound(3 * s, p);
        CHECK(bound == doctest::Approx(4 * std::pow(3.0 * s, 4.0 / 3) * std::pow(static_cast<double>(p), 2.0 / 3)));
        for (std::uint64_t a = 1; a < p; a += 3) {
          for (std::uint64_t b = 1; b < p; b += 4) {
            if (a * b % p == 1) continue;
            const auto c = curves::make_curve(f, s, f.element_at(a), f.element_at(b));
            CHECK(static_cast<double>(curves::count_points(c).value) <= bound);
          }
        }
      }
    }
    CHECK(curves::extension_point_bound_shape(10, 11) ==
          doctest::Approx(std::pow(10.0, 1.2) * std::pow(11.0, 1.6) + 1331.0));
  }

  TEST_CASE("restriction to X = c has the expected closed form") {
    const std::int64_t p = 11;
    const Field f = Field::make(11, 1);
    for (std::int64_t a = 1; a < p; a += 3) {
      for (std::int64_t b = 1; b < p; b += 2) {
        if (a * b % p == 1) continue;
        for (std::int64_t c = 0; c < p; ++c) {
          auto r = curves::restrict_to_line(f, f.element(a), f.element(b), LineShape::XMinusC, f.element(c));
          // trailing zero coefficients are trimmed
          r.coeffs.resize(3, f.zero());
          CHECK(static_cast<std::int64_t>(r.coeffs[2].c0) == oracle::md(b * c + 1, p));
          CHECK(static_cast<std::int64_t>(r.coeffs[1].c0) ==
                oracle::md(2 * c + b * c * c + a + a * b * c - c, p));
          CHECK(static_cast<std::int64_t>(r.coeffs[0].c0) == oracle::md(c * (a + c), p));
        }
      }
    }
  }

  TEST_CASE("linear factor exclusion") {
    for (std::int64_t p : {5, 7}) {
      const Field f = Field::make(static_cast<std::uint64_t>(p), 1);
      for (std::int64_t a = 1; a < p; ++a) {
        for (std::int64_t b = 1; b < p; ++b) {
          if (oracle::md(a * b, p) == 1) continue;
          const auto rep = curves::cubic_factor_exclusion(f, f.element(a), f.element(b));
          CHECK(rep.excluded);
          CHECK(rep.lines_checked == static_cast<std::uint64_t>(3 * p));
          for (int shape = 0; shape < 3; ++shape) {
            for (std::int64_t c = 0; c < p; ++c) CHECK_FALSE(oracle::line_divides(shape, c, a, b, p));
          }
          for (const auto& w : rep.candidates) CHECK_FALSE(w.coefficient == f.zero());
        }
      }
    }
    // with ab = 1 the line X = -a does divide F
    const Field f = Field::make(7, 1);
    CHECK(oracle::line_divides(0, oracle::md(-3, 7), 3, 5, 7));
    CHECK_THROWS_AS(curves::cubic_factor_exclusion(f, f.element(3), f.element(5)), Error);
  }

  TEST_CASE("parameter validation") {
    const Field f = Field::make(7, 1);
    auto code_of = [](auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::ConfigError;
    };
    CHECK(code_of([&] { curves::make_curve(f, 1, f.zero(), f.one()); }) == ErrorCode::DegenerateParameters);
    CHECK(code_of([&] { curves::make_curve(f, 1, f.element(2), f.element(4)); }) == ErrorCode::DegenerateParameters);
    CHECK(code_of([&] { curves::make_curve(f, 7, f.element(2), f.element(3)); }) == ErrorCode::InvalidArgument);
    Budget b;
    b.points = 10;
    CHECK_THROWS_AS(curves::count_points(curves::make_curve(f, 1, f.element(2), f.element(3)), b), BudgetError);
  }
}
