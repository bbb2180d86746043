#include <benchmark/benchmark.h>

#include "srca/geometry.hpp"
#include "srca/rng.hpp"
#include "srca/metrics.hpp"
#include "srca/solver.hpp"
#include "srca/synthetic.hpp"

namespace {

srca::DataMatrix noisy_sphere(int n) {
  srca::GeneratorSpec spec;
  spec.kind = srca::GeneratorKind::sphere;
  spec.n = n;
  spec.seed = 1;
  spec.noise_var = 0.01;
  return srca::generate(spec);
}

void BM_LossEvaluation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  srca::DataMatrix X = noisy_sphere(n);
  srca::IndexSet I({0, 1, 2}, 3);
  srca::WeightMatrix W = srca::WeightMatrix::identity(3);
  srca::SphereParams p{Eigen::VectorXd::Zero(3), 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(srca::loss(X, p, I, W));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LossEvaluation)->Arg(100)->Arg(1000)->Arg(10000);

void BM_GradientEvaluation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  srca::DataMatrix X = noisy_sphere(n);
  srca::IndexSet I({0, 1, 2}, 3);
  srca::WeightMatrix W = srca::WeightMatrix::identity(3);
  srca::SphereParams p{Eigen::VectorXd::Zero(3), 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(srca::loss_gradient(X, p, I, W));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GradientEvaluation)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ExhaustiveFit(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  srca::Rng rng(2);
  srca::DataMatrix X;
  X.values.resize(100, d);
  for (int i = 0; i < 100; ++i) {
    Eigen::Vector3d u(rng.normal(), rng.normal(), rng.normal());
    u /= u.norm();
    X.values.row(i).setZero();
    X.values(i, 0) = u(0);
    X.values(i, 1) = u(1);
    X.values(i, 2) = u(2);
    for (int j = 0; j < d; ++j) X.values(i, j) += rng.normal(0.0, 0.02);
  }
  srca::FitConfig cfg;
  cfg.retained_dim = 2;
  cfg.rotation.kind = srca::RotationKind::identity;
  cfg.strategy = srca::SearchStrategy::exhaustive;
  for (auto _ : state) {
    benchmark::DoNotOptimize(srca::fit(X, cfg));
  }
}
BENCHMARK(BM_ExhaustiveFit)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_RelaxedFit(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  srca::Rng rng(3);
  srca::DataMatrix X;
  X.values.resize(100, d);
  for (int i = 0; i < 100; ++i) {
    Eigen::Vector3d u(rng.normal(), rng.normal(), rng.normal());
    u /= u.norm();
    X.values.row(i).setZero();
    X.values(i, 0) = u(0);
    X.values(i, 1) = u(1);
    X.values(i, 2) = u(2);
    for (int j = 0; j < d; ++j) X.values(i, j) += rng.normal(0.0, 0.02);
  }
  srca::FitConfig cfg;
  cfg.retained_dim = 2;
  cfg.rotation.kind = srca::RotationKind::identity;
  cfg.strategy = srca::SearchStrategy::l1_relaxed;
  for (auto _ : state) {
    benchmark::DoNotOptimize(srca::fit(X, cfg));
  }
}
BENCHMARK(BM_RelaxedFit)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_CorankingMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  srca::DataMatrix X = noisy_sphere(n);
  srca::DataMatrix Y = noisy_sphere(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(srca::coranking_matrix(X, Y));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_CorankingMatrix)
    ->Arg(100)
    ->Arg(300)
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
