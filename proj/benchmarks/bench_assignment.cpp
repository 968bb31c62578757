#include <benchmark/benchmark.h>

#include <random>

#include "cbiou/assignment.hpp"

namespace {

void BM_SolveAssignment(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> value(0, 1);
    std::bernoulli_distribution forbid(0.5);
    cbiou::CostMatrix cost(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) cost(r, c) = forbid(rng) ? cbiou::CostMatrix::kForbidden : value(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(cbiou::solve_assignment(cost));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveAssignment)->RangeMultiplier(2)->Range(8, 256)->Complexity();

}  // namespace
