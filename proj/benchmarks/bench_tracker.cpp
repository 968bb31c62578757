#include <benchmark/benchmark.h>

#include "cbiou/scene.hpp"
#include "cbiou/tracker.hpp"

namespace {

void BM_TrackAblationScene(benchmark::State& state) {
    const auto scene = cbiou::generate_scene(
        cbiou::parse_scene(std::filesystem::path(CBIOU_SCENE_DIR) / "ablation.scene"));
    const cbiou::TrackerConfig config;
    for (auto _ : state) benchmark::DoNotOptimize(cbiou::run_sequence(scene.detections, config));
}
BENCHMARK(BM_TrackAblationScene);

}  // namespace
