#include <benchmark/benchmark.h>

#include "nlra/approximators.hpp"
#include "nlra/kernels.hpp"
#include "nlra/linalg.hpp"
#include "nlra/risk.hpp"

namespace {

using namespace nlra;

Matrix weights(Index d, Index m) { return sample_gaussian_matrix(d, m, RngSeed{1}); }

void BM_KernelMatrixRelu(benchmark::State& state) {
  const Matrix w = weights(64, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_matrix(w, Activation::relu()));
  }
}
BENCHMARK(BM_KernelMatrixRelu)->Arg(64)->Arg(256)->Arg(1024);

void BM_KernelMatrixSwish(benchmark::State& state) {
  const Matrix w = weights(16, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_matrix(w, Activation::swish(1.0)));
  }
}
BENCHMARK(BM_KernelMatrixSwish)->Arg(16)->Arg(64);

void BM_ReluSvd(benchmark::State& state) {
  const Matrix w = weights(state.range(0), 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relu_svd(w, state.range(1)));
  }
}
BENCHMARK(BM_ReluSvd)->Args({12, 2})->Args({16, 4})->Args({20, 5});

void BM_RiskMcGradient(benchmark::State& state) {
  const Matrix w = weights(32, 64);
  const Matrix u = sample_gaussian_matrix(32, 4, RngSeed{2});
  const Matrix v = sample_gaussian_matrix(64, 4, RngSeed{3});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        risk_mc_gradient(w, u, v, Activation::relu(), static_cast<std::size_t>(state.range(0)), RngSeed{4}));
  }
}
BENCHMARK(BM_RiskMcGradient)->Arg(8192)->Arg(65536);

void BM_EstimateKernel(benchmark::State& state) {
  const Matrix w = weights(16, 32);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_kernel(w, static_cast<std::size_t>(state.range(0)), RngSeed{5}));
  }
}
BENCHMARK(BM_EstimateKernel)->Arg(10'000)->Arg(100'000);

}  // namespace

BENCHMARK_MAIN();
