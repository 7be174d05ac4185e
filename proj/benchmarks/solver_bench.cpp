#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "bubblefield/circulant.hpp"
#include "bubblefield/dynamics.hpp"
#include "bubblefield/equilibrium.hpp"
#include "bubblefield/groundstate.hpp"

namespace bf = bubblefield;

namespace {

bf::InteractionMatrix random_matrix(int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> pts(k, std::vector<double>(5));
  for (auto& p : pts) for (auto& c : p) c = u(rng);
  return bf::interaction_matrix(bf::build_configuration(pts), bf::kappa_closed_form());
}

void BM_SolveEquilibriaK3(benchmark::State& state) {
  const auto m = random_matrix(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(bf::solve_equilibria(m));
}
BENCHMARK(BM_SolveEquilibriaK3)->Unit(benchmark::kMicrosecond);

void BM_SolveEquilibriaK10Circulant(benchmark::State& state) {
  const auto m = bf::circulant::family_matrix(bf::circulant::build_family(bf::kappa_closed_form()));
  for (auto _ : state) benchmark::DoNotOptimize(bf::solve_equilibria(m));
}
BENCHMARK(BM_SolveEquilibriaK10Circulant)->Unit(benchmark::kMillisecond);

void BM_IsolationCheckK10(benchmark::State& state) {
  const auto fam = bf::circulant::build_family(bf::kappa_closed_form());
  const auto m = bf::circulant::family_matrix(fam);
  const auto sol = bf::circulant::family_member(0.3, fam);
  for (auto _ : state) benchmark::DoNotOptimize(bf::isolation_check(sol, m));
}
BENCHMARK(BM_IsolationCheckK10)->Unit(benchmark::kMicrosecond);

void BM_IntegrateK3(benchmark::State& state) {
  const auto m = random_matrix(3, 2);
  const auto eq = bf::lift(bf::solve_equilibria(m).front());
  bf::dynamics::TrajectoryState s{0.0, eq.a * 1.01, eq.c};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bf::dynamics::integrate(s, m, bf::dynamics::PerturbationSchedule::zero(3), 0.5));
  }
}
BENCHMARK(BM_IntegrateK3)->Unit(benchmark::kMicrosecond);

void BM_VerifyKappa(benchmark::State& state) {
  bf::groundstate::QuadratureSpec spec;
  spec.n_panels = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bf::groundstate::verify_kappa(spec));
}
BENCHMARK(BM_VerifyKappa)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
