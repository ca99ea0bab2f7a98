#include <benchmark/benchmark.h>

#include "cgmt/aoengine.hpp"
#include "cgmt/ensembles.hpp"
#include "cgmt/geometry.hpp"
#include "cgmt/posolvers.hpp"

using namespace cgmt;

namespace {

ProblemInstance lasso_instance(int m, int n, std::uint64_t seed) {
  GaussianStream s({seed, 0});
  Matrix A = s.matrix(m, n);
  Vector x0 = s.vector(n);
  Vector z = s.vector(m);
  return ProblemInstance::make(std::move(A), std::move(z), std::move(x0), 1.0,
                               LossSpec{LossKind::HalfSquaredL2},
                               RegularizerSpec::make(RegularizerKind::L1Norm, 2.0));
}

ProblemInstance cone_instance(int m, int n, int k) {
  GaussianStream s({7, 0});
  Matrix A = s.matrix(m, n);
  Vector z = 0.05 * s.vector(m);
  Vector x0 = Vector::Zero(n);
  x0.head(k) = s.vector(k);
  auto cone = ConeSpec::l1_descent_at(x0);
  return ProblemInstance::make(std::move(A), std::move(z), Vector::Zero(n), 0.05,
                               LossSpec{LossKind::L2Norm}, RegularizerSpec{}, std::move(cone));
}

void BM_Fista(benchmark::State& state) {
  const auto inst = lasso_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lasso_fista(inst).objective);
}
BENCHMARK(BM_Fista)->Args({40, 80})->Args({128, 256})->Unit(benchmark::kMillisecond);

void BM_Pdhg(benchmark::State& state) {
  const auto inst = lasso_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_saddle_pdhg(inst).objective);
}
BENCHMARK(BM_Pdhg)->Args({40, 80})->Unit(benchmark::kMillisecond);

void BM_ConeLasso(benchmark::State& state) {
  const auto inst = cone_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cone_lasso(inst).objective);
}
BENCHMARK(BM_ConeLasso)->Args({64, 128})->Args({128, 256})->Unit(benchmark::kMillisecond);

void BM_ProjectL1Cone(benchmark::State& state) {
  const auto n = state.range(0);
  GaussianStream s({3, 0});
  const Vector v = s.vector(n);
  std::vector<Eigen::Index> support{0, 1, 2, 3, 4};
  const auto cone = ConeSpec::l1_descent(support, {1, -1, 1, 1, -1}, n);
  for (auto _ : state) benchmark::DoNotOptimize(project_cone(v, cone).data());
}
BENCHMARK(BM_ProjectL1Cone)->Arg(256)->Arg(4096);

void BM_GaussianWidth(benchmark::State& state) {
  const auto cone = ConeSpec::l1_descent({0, 1, 2, 3, 4}, {1, 1, 1, 1, 1}, 500);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_width(cone, {11, 0}, state.range(0)).omega);
  }
}
BENCHMARK(BM_GaussianWidth)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_AoConeValue(benchmark::State& state) {
  GaussianStream s({5, 0});
  const Vector g = s.vector(128);
  const Vector h = s.vector(256);
  const auto cone = ConeSpec::l1_descent({0, 1, 2, 3, 4}, {1, 1, 1, 1, 1}, 256);
  for (auto _ : state) benchmark::DoNotOptimize(ao_cone_value(g, h, 0.05, cone, 8.0).phi);
}
BENCHMARK(BM_AoConeValue);

void BM_SminViaPo(benchmark::State& state) {
  GaussianStream s({9, 0});
  const Matrix G = s.matrix(400, 100);
  for (auto _ : state) benchmark::DoNotOptimize(smin_via_po(G));
}
BENCHMARK(BM_SminViaPo)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
