#include <doctest.h>

#include <cmath>
#include <numbers>

#include "matpow/catmap.hpp"
#include "matpow/counting.hpp"
#include "matpow/error.hpp"
#include "matpow/prng.hpp"

using namespace matpow;
using cat::CatMatrix;
using cat::CMatrix;
using cat::cplx;
using cat::CVector;
using cat::IntPair;

namespace {

constexpr double kPi = std::numbers::pi;

CatMatrix default_cat() { return CatMatrix::make(2, 1, 3, 2); }

// Direct transcription of (T(a) psi)(u) = e^{i pi a1 a2 / N} e(a2 u / N) psi(u + a1).
CMatrix translation_oracle(int N, IntPair a) {
  CMatrix t = CMatrix::Zero(N, N);
  for (int u = 0; u < N; ++u) {
    const auto col = static_cast<int>(((u + a.a1) % N + N) % N);
    t(u, col) = std::polar(1.0, kPi * static_cast<double>(a.a1 * a.a2) / N + 2 * kPi * static_cast<double>(a.a2 * u) / N);
  }
  return t;
}

CVector random_unit(int n, Xorshift64Star& rng) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(rng.unit() - 0.5, rng.unit() - 0.5);
  return v / v.norm();
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_SUITE("catmap") {
  TEST_CASE("translations") {
    for (int N : {5, 7, 12}) {
      for (IntPair a : {IntPair{1, 0}, IntPair{0, 1}, IntPair{2, 3}, IntPair{-1, 4}}) {
        const auto t = cat::translation_op(N, a);
        CHECK((t.m - translation_oracle(N, a)).norm() < 1e-12);
        CHECK((t.m.adjoint() - cat::translation_op(N, {-a.a1, -a.a2}).m).norm() < 1e-12);
        CHECK(cat::unitarity_defect(t.m) < 1e-12);
        for (IntPair b : {IntPair{1, 1}, IntPair{3, -2}}) {
          const auto tb = cat::translation_op(N, b).m;
          // T(a) T(b) = e((a1 b2 - a2 b1) / N) T(b) T(a)
          const cplx w = std::polar(1.0, 2 * kPi * static_cast<double>(a.a1 * b.a2 - a.a2 * b.a1) / N);
          CHECK((t.m * tb - w * tb * t.m).norm() < 1e-10);
        }
      }
    }
  }

  TEST_CASE("quantization is linear in the Fourier coefficients") {
    const int N = 11;
    cat::Observable f;
    f.add({1, 0}, cplx(0.5, 0)).add({-1, 0}, cplx(0.5, 0)).add({0, 0}, cplx(2, 0));
    f.real = true;
    const CMatrix want = 0.5 * translation_oracle(N, {1, 0}) + 0.5 * translation_oracle(N, {-1, 0}) +
                         2.0 * CMatrix::Identity(N, N);
    const auto op = cat::quantize(N, f);
    CHECK((op.m - want).norm() < 1e-12);
    CHECK(op.tag == cat::OpTag::Hermitian);
    CHECK((op.m - op.m.adjoint()).norm() < 1e-12);
    CHECK(f.mean() == cplx(2, 0));
    CHECK(f.l1_nonconstant() == doctest::Approx(1.0));
  }

  TEST_CASE("unitarity and the Egorov relation") {
    const CatMatrix a = default_cat();
    for (int N = 3; N <= 61; N += 2) {
      bool prime = true;
      for (int d = 3; d * d <= N; d += 2) prime = prime && N % d;
      if (!prime) continue;
      const auto u = cat::cat_unitary_factored(N, a);
      CHECK(cat::unitarity_defect(u.m) < 1e-9);
      for (IntPair v : {IntPair{1, 0}, IntPair{0, 1}, IntPair{1, 1}, IntPair{2, -3}}) {
        CHECK(cat::egorov_defect(u, a, v) < 1e-8);
      }
      if (a.a21() % N) CHECK((u.m - cat::cat_unitary(N, a).m).norm() < 1e-9);
    }
    // independent check of the relation at N = 13: U* T(v) U is a unit multiple of T(vA)
    const int N = 13;
    const auto u = cat::cat_unitary(N, a).m;
    for (IntPair v : {IntPair{1, 0}, IntPair{0, 1}}) {
      const CMatrix lhs = u.adjoint() * translation_oracle(N, v) * u;
      const CMatrix rhs = translation_oracle(N, a.act(v));
      const cplx ratio = (rhs.adjoint() * lhs).trace() / static_cast<double>(N);
      CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-9);
      CHECK((lhs - ratio * rhs).norm() < 1e-8);
    }
  }

  TEST_CASE("unitary construction errors") {
    const CatMatrix a = default_cat();
    CHECK(code_of([&] { cat::cat_unitary(3, a); }) == ErrorCode::SingularLowerLeft);
    CHECK(code_of([&] { cat::cat_unitary(8, a); }) == ErrorCode::EvenModulus);
    CHECK(code_of([&] { cat::cat_unitary(15, a); }) == ErrorCode::CompositeModulus);
    CHECK(code_of([&] { cat::cat_unitary_factored(9, a); }) == ErrorCode::CompositeModulus);
  }

  TEST_CASE("cat matrix validation") {
    CHECK(code_of([] { CatMatrix::make(2, 1, 1, 1); }) == ErrorCode::InvalidArgument);   // det 1, parity fails
    CHECK(code_of([] { CatMatrix::make(1, 1, 0, 1); }) == ErrorCode::InvalidArgument);   // trace 2
    CHECK(code_of([] { CatMatrix::make(2, 0, 0, 2); }) == ErrorCode::InvalidArgument);   // det 4
    const CatMatrix a = CatMatrix::make(1, 2, 2, 5);
    CHECK(a.trace() == 6);
    CHECK(a.act({1, 0}) == IntPair{1, 2});
    CHECK(a.act({0, 1}) == IntPair{2, 5});
  }

  TEST_CASE("eigenbasis reconstructs the unitary") {
    for (int N : {3, 7, 13, 29}) {
      const auto u = cat::cat_unitary_factored(N, default_cat());
      const auto spaces = cat::eigenbasis(u);
      CMatrix sum = CMatrix::Zero(N, N);
      int dims = 0;
      for (const auto& s : spaces) {
        CHECK(std::abs(std::abs(s.eigenvalue) - 1.0) < 1e-9);
        CHECK((u.m * s.basis - s.eigenvalue * s.basis).norm() < 1e-8);
        CHECK((s.basis.adjoint() * s.basis - CMatrix::Identity(s.dim(), s.dim())).norm() < 1e-9);
        for (const auto& st : s.states()) CHECK(std::abs(st.inner(st) - 1.0) < 1e-9);
        sum += s.eigenvalue * s.basis * s.basis.adjoint();
        dims += s.dim();
      }
      CHECK(dims == N);
      CHECK((sum - u.m).norm() < 1e-8);
    }
    Budget b;
    b.max_quantum_dim = 10;
    CHECK_THROWS_AS(cat::eigenbasis(cat::cat_unitary(13, default_cat()), b), BudgetError);
  }

  TEST_CASE("eigenfunction deviation") {
    const CatMatrix a = default_cat();
    CHECK(cat::delta_Nf(a, 11, cat::Observable::constant(3.0)) < 1e-12);
    Xorshift64Star rng(5);
    for (int N : {11, 13, 23}) {
      const auto u = cat::cat_unitary_factored(N, a);
      const auto spaces = cat::eigenbasis(u);
      const auto f = cat::Observable::symmetric_pair({1, 0}, 1.0);
      const auto op = cat::quantize(N, f);
      const double delta = cat::delta_from_spaces(spaces, op, f.mean());
      CHECK(delta == doctest::Approx(cat::delta_Nf(a, N, f)));
      CHECK(delta <= f.l1_nonconstant() + 1e-12);
      // random normalized eigenfunctions never exceed the sup; one-dimensional
      // spaces attain it exactly
      double sampled = 0;
      for (const auto& s : spaces) {
        for (int trial = 0; trial < (s.dim() == 1 ? 1 : 40); ++trial) {
          const CVector psi = s.basis * random_unit(s.dim(), rng);
          sampled = std::max(sampled, std::abs((psi.adjoint() * op.m * psi)(0, 0) - f.mean()));
        }
      }
      CHECK(sampled <= delta + 1e-9);
      bool all_simple = true;
      for (const auto& s : spaces) all_simple = all_simple && s.dim() == 1;
      if (all_simple) CHECK(sampled == doctest::Approx(delta));
      cat::Observable shifted = f;
      shifted.add({0, 0}, cplx(5, 0));
      CHECK(cat::delta_from_spaces(spaces, cat::quantize(N, shifted), shifted.mean()) == doctest::Approx(delta));
    }
    cat::Observable complex_f;
    complex_f.add({1, 0}, cplx(1, 0));
    CHECK(code_of([&] { cat::delta_Nf(a, 11, complex_f); }) == ErrorCode::NonRealObservable);
  }

  TEST_CASE("numerical radius") {
    Xorshift64Star rng(8);
    for (int n : {2, 4, 7}) {
      CMatrix c(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) c(i, j) = cplx(rng.unit() - 0.5, rng.unit() - 0.5);
      }
      const auto r = cat::numerical_radius(c);
      double lower = 0;
      for (int trial = 0; trial < 2000; ++trial) {
        const CVector v = random_unit(n, rng);
        lower = std::max(lower, std::abs((v.adjoint() * c * v)(0, 0)));
      }
      CHECK(lower <= r.estimate + 1e-9);
      CHECK(r.estimate <= r.upper + 1e-12);
      // w(C) lies between ||C||/2 and ||C||
      const double op_norm = Eigen::JacobiSVD<CMatrix>(c).singularValues()(0);
      CHECK(r.estimate >= op_norm / 2 - 1e-9);
      CHECK(r.estimate <= op_norm + 1e-9);
    }
    // normal matrix: radius = largest |eigenvalue|
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = cplx(0, 2);
    d(1, 1) = cplx(-1, 1);
    d(2, 2) = cplx(0.5, 0);
    CHECK(cat::numerical_radius(d).estimate == doctest::Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("matrix element inequality") {
    const CatMatrix a = default_cat();
    for (int nu : {2, 3}) {
      const auto r = cat::matrix_element_check(a, 11, {1, 0}, nu);
      const double tau = static_cast<double>(r.tau);
      const auto q = count::count_Q(mat::MatEntity(a.mod_p(ff::Field::make(11, 1))), nu).value;
      CHECK(r.q_count == q);
      CHECK(r.rhs == doctest::Approx(std::pow(tau, -2.0 * nu) * 11.0 * static_cast<double>(q)));
      CHECK(r.lhs == doctest::Approx(std::pow(r.radius, 2.0 * nu)));
      CHECK(r.radius <= r.radius_upper + 1e-12);
      CHECK(r.radius <= 1.0 + 1e-9);
      CHECK(r.holds);
    }
    CHECK(code_of([&] { cat::matrix_element_check(a, 11, {0, 0}, 2); }) == ErrorCode::DependentVectors);
    CHECK(code_of([&] { cat::matrix_element_check(a, 11, {1, 0}, 4); }) == ErrorCode::InvalidArgument);
  }
}
