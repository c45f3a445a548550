#include <benchmark/benchmark.h>

#include "rqmc/estimator.hpp"
#include "rqmc/gf2.hpp"
#include "rqmc/netgen.hpp"
#include "rqmc/partitions.hpp"
#include "rqmc/walsh.hpp"

namespace N = rqmc::netgen;

static void BM_GeneratePoints(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  N::Rng rng(1);
  const auto C = N::generator_identity(m);
  const auto M = N::random_linear_scramble(m, 64, rng);
  const auto D = N::random_digital_shift(64, rng);
  for (auto _ : state) benchmark::DoNotOptimize(N::generate_points(C, M, D));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << m));
}
BENCHMARK(BM_GeneratePoints)->DenseRange(8, 16, 4);

static void BM_ReplicateEstimate(benchmark::State& state) {
  rqmc::estimator::ExperimentConfig cfg;
  cfg.k = 1;
  cfg.R = 64;
  cfg.threads = 1;
  cfg.m_range = {static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(rqmc::estimator::run_replicates(cfg, cfg.m_range.front()));
}
BENCHMARK(BM_ReplicateEstimate)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_MinDependentNorm(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const long th = rqmc::partitions::lambda_threshold(m).value;
  std::uint64_t r = 0;
  for (auto _ : state) {
    auto rng = N::derive_replicate_rng(3, r++, static_cast<std::uint64_t>(m));
    const auto M = N::random_linear_scramble(m, static_cast<int>(th), rng);
    benchmark::DoNotOptimize(rqmc::gf2::min_dependent_norm(M.bits(), static_cast<int>(th)));
  }
}
BENCHMARK(BM_MinDependentNorm)->Arg(8)->Arg(12)->Arg(16);

static void BM_PartitionTable(benchmark::State& state) {
  const auto method = state.range(1) ? rqmc::partitions::PartitionTable::Method::pentagonal
                                      : rqmc::partitions::PartitionTable::Method::subset_dp;
  for (auto _ : state) benchmark::DoNotOptimize(rqmc::partitions::PartitionTable::build(state.range(0), method));
}
BENCHMARK(BM_PartitionTable)->Args({2000, 0})->Args({2000, 1})->Args({38283, 1})->Unit(benchmark::kMillisecond);

static void BM_Chi(benchmark::State& state) {
  const std::uint64_t k = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rqmc::walsh::chi(4, k));
}
BENCHMARK(BM_Chi)->Arg(5)->Arg(300)->Arg(4000);

static void BM_ChiByHalving(benchmark::State& state) {
  const std::uint64_t k = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rqmc::walsh::chi_by_halving(4, k));
}
BENCHMARK(BM_ChiByHalving)->Arg(5)->Arg(300)->Arg(4000)->Arg(1 << 30);
BENCHMARK_MAIN();
