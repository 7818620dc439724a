// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "heckelab/hecke.hpp"
#include "heckelab/kernel.hpp"
#include "heckelab/supnorm.hpp"

using namespace heckelab;

static void BM_HeckeMatrices_Batched(benchmark::State& state) {
  const int kmax = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hecke_matrices(13, kmax));
}
BENCHMARK(BM_HeckeMatrices_Batched)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_HeckeMatrices_Serial(benchmark::State& state) {
  const int kmax = static_cast<int>(state.range(0));
  for (auto _ : state)
    for (int k = 0; k <= kmax; ++k) benchmark::DoNotOptimize(reference::hecke_matrix(13, k));
}
BENCHMARK(BM_HeckeMatrices_Serial)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static const SpectralWindow& window() {
  static const SpectralWindow w;
  return w;
}

static void BM_HeckeKernel_Parallel(benchmark::State& state) {
  const Vector3 x = unit_vector(0.7, 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(hecke_kernel_diag(state.range(0), 40.0, x, window()));
}
BENCHMARK(BM_HeckeKernel_Parallel)->Arg(169)->Arg(4225)->Unit(benchmark::kMillisecond);

static void BM_HeckeKernel_Serial(benchmark::State& state) {
  const Vector3 x = unit_vector(0.7, 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::hecke_kernel_diag(state.range(0), 40.0, x, window()));
}
BENCHMARK(BM_HeckeKernel_Serial)->Arg(169)->Arg(4225)->Unit(benchmark::kMillisecond);

static void BM_SupGrid_Parallel(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Eigen::MatrixXd V = Eigen::MatrixXd::Identity(2 * k + 1, 2 * k + 1);
  for (auto _ : state) benchmark::DoNotOptimize(sup_norms(k, V, 8 * k, 0));
}
BENCHMARK(BM_SupGrid_Parallel)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_SupGrid_Serial(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Eigen::MatrixXd V = Eigen::MatrixXd::Identity(2 * k + 1, 2 * k + 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::grid_max(k, V, 8 * k));
}
BENCHMARK(BM_SupGrid_Serial)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
