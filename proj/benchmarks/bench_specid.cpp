#include <benchmark/benchmark.h>

#include "specid/pipeline.hpp"

using namespace specid;

namespace {

LinearizedSystem random_system(std::uint64_t seed, int m) {
  Rng rng(seed);
  Eigen::MatrixXd A(m, m), B(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      A(i, j) = rng.uniform(0, 20);
      B(i, j) = rng.uniform(0, 20);
    }
  return make_linear_system(A, B, Eigen::MatrixXd::Identity(m, m));
}

void BM_SolvePencil(benchmark::State& state) {
  const auto sys = random_system(1, static_cast<int>(state.range(0)));
  const Eigen::MatrixXd G = sys.coupling();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_pencil(sys.A, G, cdouble(-1.0, 0.5)));
  }
}
BENCHMARK(BM_SolvePencil)->Arg(2)->Arg(4)->Arg(6);

void BM_CandidateSetExactInput(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sys = random_system(2, 2);
  const auto L = laplacian(dense_uniform_graph(n, 3));
  const auto mus = jacobian_spectrum(build_jacobian(sys, L));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_candidate_set(sys.A, sys.coupling(), mus));
  }
}
BENCHMARK(BM_CandidateSetExactInput)->Arg(10)->Arg(50)->Arg(100);

void BM_Algorithm1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sys = random_system(2, 2);
  const auto L = laplacian(dense_uniform_graph(n, 3));
  const auto set = build_candidate_set(sys.A, sys.coupling(),
                                       jacobian_spectrum(build_jacobian(sys, L)));
  for (auto _ : state) benchmark::DoNotOptimize(algorithm1_filter(set, 1e-4));
}
BENCHMARK(BM_Algorithm1)->Arg(50)->Arg(200);

void BM_JacobianSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sys = random_system(4, 2);
  const auto J = build_jacobian(sys, laplacian(dense_uniform_graph(n, 5)));
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_spectrum(J));
}
BENCHMARK(BM_JacobianSpectrum)->Arg(10)->Arg(50)->Arg(100);

void BM_DelayDmd(benchmark::State& state) {
  ExperimentConfig config;
  config.simulation.q = static_cast<int>(state.range(0));
  const auto model = make_model(config);
  const auto snapshots = simulate_snapshots(config, model, generate_graph(config));
  for (auto _ : state) benchmark::DoNotOptimize(run_dmd(config, model, snapshots));
}
BENCHMARK(BM_DelayDmd)->Arg(10)->Arg(40);

void BM_Simulate(benchmark::State& state) {
  ExperimentConfig config;
  config.model.preset = "brusselator";
  config.graph.n = static_cast<int>(state.range(0));
  config.graph.p_edge = 0.3;
  config.simulation.q = 1;
  config.simulation.K = 50;
  config.simulation.substeps = 50;
  const auto model = make_model(config);
  const auto graph = generate_graph(config);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_snapshots(config, model, graph));
}
BENCHMARK(BM_Simulate)->Arg(10)->Arg(100);

void BM_CharPoly(benchmark::State& state) {
  const auto sys = random_system(6, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(char_poly(sys.A, sys.coupling()));
}
BENCHMARK(BM_CharPoly)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
