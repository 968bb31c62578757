#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

#include "cbiou/geometry.hpp"
#include "cbiou/metrics.hpp"
#include "cbiou/tracker.hpp"

namespace cbiou {

/// Constant per-frame velocity of all four box components over frames [first, last].
struct Segment {
    long first;
    long last;
    double vx = 0.0;
    double vy = 0.0;
    double vw = 0.0;
    double vh = 0.0;
};

/// A scripted object. It is visible on every frame covered by a segment. Its
/// box is `start` on the first visible frame; on each later visible frame f
/// it advances from the previous visible frame p by (f - p) times the
/// velocity of the segment containing f, so a gap between segments jumps.
struct ObjectScript {
    BoundingBox start{0.0, 0.0, 1.0, 1.0};
    std::vector<Segment> segments;
};

/// Synthetic irregular-motion scene with a noisy detector model.
///
/// Text form, one entry per line, '#' starts a comment:
///
///     seed=7
///     frames=60
///     jitter=2.0          # detector noise sigma in pixels, all four components
///     drop=0.05           # probability a ground-truth box is not detected
///     object 1: start 100 200 40 80
///     object 1: 1..30 48 0 0 0
///     object 1: 31..60 -2 0 0 0
struct SceneSpec {
    std::uint64_t seed = 0;
    long frames = 0;
    double jitter = 0.0;
    double drop = 0.0;
    std::map<long, ObjectScript> objects;

    /// Throws InvalidArgument on inconsistent scripts.
    void validate() const;
};

SceneSpec parse_scene(std::istream& in);
SceneSpec parse_scene(const std::filesystem::path& path);

struct Scene {
    DetectionsByFrame detections;
    FrameAnnotations ground_truth;
};

/// Exact ground truth from the scripts; detections are the ground-truth
/// boxes perturbed by the detector model. Same SceneSpec, same output.
Scene generate_scene(const SceneSpec& spec);

}  // namespace cbiou
