#include <benchmark/benchmark.h>

#include <random>

#include "cbiou/refiner.hpp"

namespace {

void BM_ClusterTracklets(benchmark::State& state) {
    const auto n = static_cast<long>(state.range(0));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0, 1);
    std::vector<cbiou::Tracklet> tracks;
    for (long id = 1; id <= n; ++id) {
        cbiou::Tracklet t;
        t.id = id;
        const long first = (id * 7) % 100 + 1;
        for (long f = first; f < first + 10; ++f) {
            t.points.push_back({f, cbiou::BoundingBox(0, 0, 10, 10)});
            t.features.push_back({g(rng), g(rng), g(rng), g(rng), g(rng), g(rng), g(rng), g(rng)});
        }
        tracks.push_back(std::move(t));
    }
    for (auto _ : state) benchmark::DoNotOptimize(cbiou::cluster(tracks, 0.4));
}
BENCHMARK(BM_ClusterTracklets)->Arg(16)->Arg(64);

}  // namespace
