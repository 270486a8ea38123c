#include <doctest.h>

#include "matpow/error.hpp"
#include "matpow/harness.hpp"
#include "matpow/matgrp.hpp"
#include "matpow/prng.hpp"
#include "oracles.hpp"

using namespace matpow;
using ff::Elem;
using ff::Field;
using mat::MatEntity;
using mat::Matrix;
using mat::Vec;

namespace {

Matrix random_matrix(const Field& f, int n, Xorshift64Star& rng) {
  std::vector<Elem> e;
  for (int i = 0; i < n * n; ++i) e.push_back(f.element_at(rng.uniform(f.size())));
  return Matrix::from_elems(f, n, e);
}

std::uint64_t brute_order(const Matrix& a) {
  std::uint64_t t = 1;
  for (Matrix m = a; !m.is_identity(); m = m * a) ++t;
  return t;
}

}  // namespace

TEST_SUITE("matgrp") {
  TEST_CASE("companion orders match the integer oracle") {
    for (std::int64_t p : {5, 7, 11, 13, 29}) {
      const Field f = Field::make(static_cast<std::uint64_t>(p), 1);
      for (std::int64_t u = 0; u < p; ++u) {
        const MatEntity m(mat::companion_sl2(f, f.element(u)));
        CHECK(m.tau() == oracle::powers(oracle::companion(u, p), p).size());
        CHECK(m.t() == 1);
        CHECK(m.in_sl());
      }
    }
  }

  TEST_CASE("random matrices: order, inverse, determinant") {
    Xorshift64Star rng(7);
    for (int n : {2, 3}) {
      const Field f = Field::make(7, 1);
      for (int trial = 0; trial < 40; ++trial) {
        const Matrix a = random_matrix(f, n, rng);
        if (a.det() == f.zero()) {
          CHECK(a.rank() < n);
          CHECK_THROWS_AS(a.inverse(), Error);
          continue;
        }
        CHECK((a * a.inverse()).is_identity());
        const MatEntity m(a);
        CHECK(m.tau() == brute_order(a));
        CHECK(m.t() == f.mult_order(a.det()));
        CHECK(m.orbit().size() == m.tau());
        CHECK(m.orbit().back().is_identity());
      }
    }
  }

  TEST_CASE("order over the quadratic extension") {
    Xorshift64Star rng(11);
    const Field f = Field::make(5, 2);
    for (int trial = 0; trial < 30; ++trial) {
      const Matrix a = random_matrix(f, 2, rng);
      if (a.det() == f.zero()) continue;
      CHECK(MatEntity(a).tau() == brute_order(a));
    }
  }

  TEST_CASE("classification of SL(2, p) traces") {
    for (std::uint64_t p : {5u, 7u, 11u, 13u, 17u}) {
      const auto all = harness::scan_sl2(p, harness::ClassFilter::All, true);
      CHECK(all.size() == p);
      std::size_t split = 0, irr = 0, nondiag = 0;
      for (const auto& inst : all) {
        const auto& fac = inst.entity.factorization();
        REQUIRE(fac);
        switch (inst.cls) {
          case harness::Sl2Class::Split:
            ++split;
            CHECK(fac->tag == mat::FactorTag::Split);
            CHECK(*inst.entity.diagonalizable());
            CHECK((p - 1) % inst.entity.tau() == 0);
            break;
          case harness::Sl2Class::Irreducible:
            ++irr;
            CHECK(fac->tag == mat::FactorTag::Irreducible);
            CHECK(*inst.entity.diagonalizable());
            CHECK((p + 1) % inst.entity.tau() == 0);
            break;
          case harness::Sl2Class::NonDiagonalizable:
            ++nondiag;
            CHECK_FALSE(*inst.entity.diagonalizable());
            break;
        }
      }
      CHECK(nondiag == 2);
      CHECK(split == (p - 3) / 2);
      CHECK(irr == (p - 1) / 2);
      // u = 0 is split iff p = 1 mod 4
      CHECK((all[0].cls == harness::Sl2Class::Split) == (p % 4 == 1));
    }
  }

  TEST_CASE("eigenvalue orders give the matrix order") {
    for (const auto& inst : harness::scan_sl2(23, harness::ClassFilter::All)) {
      const auto& e = inst.entity.eigen();
      REQUIRE(e);
      std::uint64_t l = 1;
      for (const auto& v : e->values) l = ff::lcm(l, e->field.mult_order(v));
      CHECK(l == inst.entity.tau());
    }
  }

  TEST_CASE("independence of the Krylov vectors") {
    const Field f = Field::make(7, 1);
    const Matrix a = Matrix::from_ints(f, 2, {2, 0, 0, 4});
    CHECK_FALSE(mat::independence_check(Vec::row(f, {1, 0}), a));  // eigenvector
    CHECK(mat::independence_check(Vec::row(f, {1, 1}), a));
    CHECK(mat::independence_check_extended(Vec::row(f, {1, 1}), a));
    CHECK_THROWS_AS(mat::independence_check(Vec::row(f, {0, 0}), a), Error);
  }

  TEST_CASE("non-diagonalizable and scalar matrices") {
    const Field f = Field::make(5, 1);
    const MatEntity j(Matrix::from_ints(f, 2, {1, 1, 0, 1}));
    CHECK_FALSE(*j.diagonalizable());
    CHECK(j.tau() == 5);
    const MatEntity s(Matrix::from_ints(f, 2, {2, 0, 0, 2}));
    CHECK(*s.diagonalizable());
    CHECK(s.tau() == 4);
  }

  TEST_CASE("companion realization reproduces the trace sequence") {
    for (std::uint64_t p : {5u, 7u, 13u}) {
      const Field fq = Field::make(p, 2);
      const Field fp = fq.prime_field();
      const auto n = ff::norm_subgroup(fq);
      const Elem a = fq.element(3, 1);
      const auto cr = mat::companion_realization(fq, n.generator, a);
      Matrix pw = Matrix::identity(fp, 2);
      Elem lam = fq.one();
      for (int x = 0; x < 20; ++x) {
        const Elem lhs = mat::dot(cr.a * pw, cr.b);
        CHECK(lhs.c0 == fq.trace(fq.mul(a, lam)));
        pw = pw * cr.A;
        lam = fq.mul(lam, n.generator);
      }
    }
    const Field fq = Field::make(7, 2);
    CHECK_THROWS_AS(mat::companion_realization(fq, fq.element(2, 0), fq.one()), Error);
  }

  TEST_CASE("canonical keys distinguish matrices") {
    const Field f = Field::make(13, 1);
    const Matrix a = Matrix::from_ints(f, 2, {1, 2, 3, 4});
    const Matrix b = Matrix::from_ints(f, 2, {1, 2, 3, 5});
    CHECK(a.key() == Matrix::from_ints(f, 2, {14, 15, 16, 17}).key());
    CHECK_FALSE(a.key() == b.key());
  }
}
