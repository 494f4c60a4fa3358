#include <benchmark/benchmark.h>

#include "maxstab/deterministic.hpp"
#include "maxstab/fixtures.hpp"
#include "maxstab/monte_carlo.hpp"
#include "maxstab/rng.hpp"
#include "maxstab/stochastic.hpp"

using namespace maxstab;

namespace {

SemiringMatrix random_matrix(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    SemiringMatrix m(n, n, Algebra::MaxProduct);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.set(i, j, rng.uniform(0.0, 1.0));
    return m;
}

void MatMul(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SemiringMatrix a = random_matrix(n, 1);
    const SemiringMatrix b = random_matrix(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mat_mul(a, b));
    }
    state.SetComplexityN(n);
}
BENCHMARK(MatMul)->RangeMultiplier(2)->Range(2, 64)->Complexity(benchmark::oNCubed);

void MaxCycleMean(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SemiringMatrix a = random_matrix(n, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_cycle_mean(a));
    }
    state.SetComplexityN(n);
}
BENCHMARK(MaxCycleMean)->RangeMultiplier(2)->Range(2, 64)->Complexity(benchmark::oNCubed);

void KleenePlus(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SemiringMatrix a = random_matrix(n, 4);
    const double rho = max_cycle_mean(a);
    SemiringMatrix scaled(n, n, Algebra::MaxProduct);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scaled.set(i, j, 0.8 / rho * a.at(i, j));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kleene_plus(scaled));
    }
}
BENCHMARK(KleenePlus)->RangeMultiplier(2)->Range(2, 32);

void VerifyOneStep(benchmark::State& state) {
    const JumpLinearSystem sys = fixtures::two_mode();
    const MarkovChain chain = fixtures::two_mode_chain();
    const auto p = fixtures::two_mode_p();
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_one_step(sys, chain, p));
    }
}
BENCHMARK(VerifyOneStep);

void SearchCertificate(benchmark::State& state) {
    const JumpLinearSystem sys = fixtures::two_mode();
    const MarkovChain chain = fixtures::two_mode_chain();
    SearchOptions opts;
    opts.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(search_certificate(sys, chain, 1, opts));
    }
}
BENCHMARK(SearchCertificate);

void SimulatePath(benchmark::State& state) {
    const JumpLinearSystem sys = fixtures::two_mode();
    const MarkovChain chain = fixtures::two_mode_chain();
    const std::vector<double> x0{1.0, 1.0};
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(sys, chain, x0, 1, 500, seed++));
    }
}
BENCHMARK(SimulatePath);

}  // namespace

BENCHMARK_MAIN();
