#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cbiou/geometry.hpp"

namespace {

std::vector<cbiou::BoundingBox> boxes(std::size_t n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> pos(0, 1000), size(5, 200);
    std::vector<cbiou::BoundingBox> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(pos(rng), pos(rng), size(rng), size(rng));
    return out;
}

void BM_Iou(benchmark::State& state) {
    const auto b = boxes(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cbiou::iou(b[i & 1023], b[(i + 1) & 1023]));
        ++i;
    }
}
BENCHMARK(BM_Iou);

void BM_Biou(benchmark::State& state) {
    const auto b = boxes(1024);
    const cbiou::BufferScale scale(0.3);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cbiou::biou(b[i & 1023], b[(i + 1) & 1023], scale));
        ++i;
    }
}
BENCHMARK(BM_Biou);

}  // namespace
