#include <benchmark/benchmark.h>

#include <random>

#include "ggmlab/linalg.hpp"
#include "ggmlab/prox.hpp"

namespace {

using ggmlab::Matrix;

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

Matrix random_symmetric(Eigen::Index n, unsigned seed) {
  const Matrix a = random_matrix(n, n, seed);
  return (a + a.transpose()) / 2.0;
}

void BM_SoftThreshold(benchmark::State& state) {
  const Matrix z = random_symmetric(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ggmlab::soft_threshold(z, 0.3));
}
BENCHMARK(BM_SoftThreshold)->RangeMultiplier(2)->Range(16, 256);

void BM_ProxLogdet(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Matrix z = random_symmetric(n, 2);
  const Matrix s = random_symmetric(n, 3);
  ggmlab::ProxWorkspace ws(n);
  for (auto _ : state) benchmark::DoNotOptimize(ggmlab::prox_logdet(z, s, 0.5, ws));
}
BENCHMARK(BM_ProxLogdet)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMicrosecond);

void BM_GroupRowShrink(benchmark::State& state) {
  const Matrix z = random_matrix(state.range(0), state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(ggmlab::group_row_shrink(z, 0.5));
}
BENCHMARK(BM_GroupRowShrink)->RangeMultiplier(2)->Range(16, 256);

void BM_ProxP21Coupled(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Matrix a = random_matrix(n, n, 5);
  const Matrix theta2 = a * a.transpose() / static_cast<double>(n) + Matrix::Identity(n, n);
  const ggmlab::SymmetricEigen eig = ggmlab::eigen_symmetric(theta2);
  const Matrix z = random_matrix(n, n, 6);
  const Matrix z2 = random_matrix(n, n, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ggmlab::prox_p21_coupled(z, z2, 1.0, 0.5, eig));
  }
}
BENCHMARK(BM_ProxP21Coupled)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMicrosecond);

void BM_PsdEigShrink(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Matrix z = random_symmetric(n, 8);
  ggmlab::ProxWorkspace ws(n);
  for (auto _ : state) benchmark::DoNotOptimize(ggmlab::psd_eig_shrink(z, 0.2, ws));
}
BENCHMARK(BM_PsdEigShrink)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMicrosecond);

}  // namespace
