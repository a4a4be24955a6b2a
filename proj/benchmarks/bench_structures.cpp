#include <random>

#include "benchmark/benchmark.h"
#include "psum/baseline.hpp"
#include "psum/binset.hpp"
#include "psum/nmtree.hpp"

using namespace psum;

namespace {

constexpr uint64_t kModulus = 4;

void BM_NmTreeUpdate(benchmark::State& state) {
  const uint64_t n = state.range(0);
  NmTree t(n, kModulus, 1);
  std::mt19937_64 rng(1);
  for (auto _ : state) t.update(rng() % (n - 1), rng() % kModulus);
}
BENCHMARK(BM_NmTreeUpdate)->Range(1 << 4, 1 << 16);

void BM_NmTreeRetrieve(benchmark::State& state) {
  const uint64_t n = state.range(0);
  NmTree t(n, kModulus, 1);
  std::mt19937_64 rng(1);
  for (uint64_t i = 0; i < n; ++i) t.update(i, rng() % kModulus);
  for (auto _ : state) benchmark::DoNotOptimize(t.retrieve(rng() % n));
}
BENCHMARK(BM_NmTreeRetrieve)->Range(1 << 4, 1 << 16);

void BM_NmTreeRetrieveTableFree(benchmark::State& state) {
  const uint64_t n = state.range(0);
  NmTree t(n, kModulus, NmTree::max_iota(n));
  std::mt19937_64 rng(1);
  for (uint64_t i = 0; i < n; ++i) t.update(i, rng() % kModulus);
  for (auto _ : state) benchmark::DoNotOptimize(t.retrieve(rng() % n));
}
BENCHMARK(BM_NmTreeRetrieveTableFree)->Range(1 << 4, 1 << 16);

void BM_FenwickUpdate(benchmark::State& state) {
  const uint64_t n = state.range(0);
  FenwickTree t(n, kModulus);
  std::mt19937_64 rng(1);
  for (auto _ : state) t.update(rng() % n, rng() % kModulus);
}
BENCHMARK(BM_FenwickUpdate)->Range(1 << 4, 1 << 16);

void BM_FenwickRetrieve(benchmark::State& state) {
  const uint64_t n = state.range(0);
  FenwickTree t(n, kModulus);
  std::mt19937_64 rng(1);
  for (uint64_t i = 0; i < n; ++i) t.update(i, rng() % kModulus);
  for (auto _ : state) benchmark::DoNotOptimize(t.retrieve(rng() % n));
}
BENCHMARK(BM_FenwickRetrieve)->Range(1 << 4, 1 << 16);

void BM_BinSeTRetrieve(benchmark::State& state) {
  const uint64_t n = state.range(0);
  Semigroup<uint64_t> add{
      [](const uint64_t& a, const uint64_t& b) { return (a + b) % kModulus; },
      uint64_t{0},
      {}};
  BinSeT<uint64_t> t(add);
  std::mt19937_64 rng(1);
  for (uint64_t i = 0; i < n; ++i) t.insert(i, rng() % kModulus);
  for (auto _ : state) benchmark::DoNotOptimize(t.retrieve(rng() % n));
}
BENCHMARK(BM_BinSeTRetrieve)->Range(1 << 4, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
