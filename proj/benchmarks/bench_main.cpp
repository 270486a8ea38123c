#include <benchmark/benchmark.h>

#include "matpow/catmap.hpp"
#include "matpow/charsums.hpp"
#include "matpow/counting.hpp"
#include "matpow/curves.hpp"
#include "matpow/matgrp.hpp"

using namespace matpow;

namespace {

mat::MatEntity companion(std::uint64_t p, std::int64_t u) {
  const ff::Field f = ff::Field::make(p, 1);
  return mat::MatEntity(mat::companion_sl2(f, f.element(u)));
}

void BM_AdditiveEnergy(benchmark::State& state) {
  const auto m = companion(static_cast<std::uint64_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(count::additive_energy(m, Budget::defaults()).value);
  state.counters["tau"] = static_cast<double>(m.tau());
}
BENCHMARK(BM_AdditiveEnergy)->Arg(101)->Arg(401)->Arg(1009);

void BM_CountQ3(benchmark::State& state) {
  const auto m = companion(static_cast<std::uint64_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(count::count_Q(m, 3, Budget::defaults()).value);
}
BENCHMARK(BM_CountQ3)->Arg(61)->Arg(101);

void BM_MatrixExpSum(benchmark::State& state) {
  const ff::Field f = ff::Field::make(static_cast<std::uint64_t>(state.range(0)), 1);
  const auto m = companion(f.p(), 5);
  const ff::CharacterSpec chi{f, f.one()};
  const auto a = mat::Vec::row(f, {1, 2});
  const auto b = mat::Vec::column(f, {3, 1});
  for (auto _ : state) benchmark::DoNotOptimize(sums::matrix_exp_sum(a, b, m, chi).value);
}
BENCHMARK(BM_MatrixExpSum)->Arg(1009)->Arg(10007);

void BM_Kloosterman(benchmark::State& state) {
  const ff::Field f = ff::Field::make(static_cast<std::uint64_t>(state.range(0)), 1);
  const auto g = ff::subgroup_of_order(f, f.p() - 1);
  const ff::CharacterSpec chi{f, f.one()};
  for (auto _ : state) benchmark::DoNotOptimize(sums::kloosterman_subgroup(g, f.element(2), f.element(3), chi).value);
}
BENCHMARK(BM_Kloosterman)->Arg(1009)->Arg(10007);

void BM_CountPoints(benchmark::State& state) {
  const ff::Field f = ff::Field::make(static_cast<std::uint64_t>(state.range(0)), 1);
  const auto c = curves::make_curve(f, 2, f.element(3), f.element(5));
  for (auto _ : state) benchmark::DoNotOptimize(curves::count_points(c, Budget::defaults()).value);
}
BENCHMARK(BM_CountPoints)->Arg(101)->Arg(499);

void BM_CatEigenbasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto u = cat::cat_unitary(n, cat::CatMatrix::make(2, 1, 3, 2));
  for (auto _ : state) benchmark::DoNotOptimize(cat::eigenbasis(u, Budget::defaults()).size());
}
BENCHMARK(BM_CatEigenbasis)->Arg(61)->Arg(199);

}  // namespace

BENCHMARK_MAIN();
