#pragma once

#include <cstddef>
#include <vector>

#include "cbiou/geometry.hpp"

namespace cbiou {

/// One observed box of a track.
struct TrackPoint {
    long frame;
    BoundingBox box;
    double score = 1.0;

    friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

using FeatureVector = std::vector<double>;

/// A finished track: the observed boxes of one identity, strictly increasing
/// in frame, with optional per-frame appearance features.
struct Tracklet {
    long id = 0;
    std::vector<TrackPoint> points;
    /// Either empty or exactly one vector per point.
    std::vector<FeatureVector> features;

    std::size_t size() const noexcept { return points.size(); }
    bool has_features() const noexcept { return !features.empty(); }
    long first_frame() const { return points.front().frame; }
    long last_frame() const { return points.back().frame; }
    std::vector<long> frames() const;

    /// Throws InvalidArgument when frames are not strictly increasing, the
    /// feature count mismatches, or a feature vector has zero norm.
    void validate() const;

    friend bool operator==(const Tracklet&, const Tracklet&) = default;
};

}  // namespace cbiou
