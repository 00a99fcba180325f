// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "opshape/kernels.hpp"
#include "opshape/synth.hpp"

namespace {

using namespace opshape;

DirectionSample bench_sample(Eigen::Index n) {
  return tangent_gaussian_sample(Eigen::Vector3d(0.2, -0.6, 0.7), 0.3, n, 17);
}

template <auto Kernel>
void BM_LeaveOneOut(benchmark::State& state) {
  const auto sample = bench_sample(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(sample, 0.05, std::nullopt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_Coverage(benchmark::State& state) {
  CoverageConfig config;
  config.replications = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_Bootstrap(benchmark::State& state) {
  const auto sample = bench_sample(200);
  for (auto _ : state)
    benchmark::DoNotOptimize(Kernel(sample, static_cast<int>(state.range(0)), 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_SceneDirections(benchmark::State& state) {
  const auto images = synth_study(8, static_cast<int>(state.range(0)), 0.1, 5).images;
  const FrameSpec spec({1, 2, 4, 3}, {5, 6, 7, 8});
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(images, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_LeaveOneOut<kernels::serial::leave_one_out>)->Name("loo/serial")->Arg(100)->Arg(1000);
BENCHMARK(BM_LeaveOneOut<kernels::omp::leave_one_out>)->Name("loo/omp")->Arg(100)->Arg(1000)->UseRealTime();
BENCHMARK(BM_Coverage<kernels::serial::coverage_replicates>)->Name("coverage/serial")->Arg(200);
BENCHMARK(BM_Coverage<kernels::omp::coverage_replicates>)->Name("coverage/omp")->Arg(200)->UseRealTime();
BENCHMARK(BM_Bootstrap<kernels::serial::bootstrap_ts>)->Name("bootstrap/serial")->Arg(2000);
BENCHMARK(BM_Bootstrap<kernels::omp::bootstrap_ts>)->Name("bootstrap/omp")->Arg(2000)->UseRealTime();
BENCHMARK(BM_SceneDirections<kernels::serial::scene_directions>)->Name("scenes/serial")->Arg(1000);
BENCHMARK(BM_SceneDirections<kernels::omp::scene_directions>)->Name("scenes/omp")->Arg(1000)->UseRealTime();

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
