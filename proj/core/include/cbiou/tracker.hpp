#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "cbiou/assignment.hpp"
#include "cbiou/geometry.hpp"
#include "cbiou/motion.hpp"
#include "cbiou/tracklet.hpp"

namespace cbiou {

struct Detection {
    Detection(long frame, BoundingBox box, double score = 1.0);

    long frame;
    BoundingBox box;
    double score;

    friend bool operator==(const Detection&, const Detection&) = default;
};

/// Detections keyed by frame index, ascending.
using DetectionsByFrame = std::map<long, std::vector<Detection>>;

struct TrackerConfig {
    BufferScale b1{0.3};
    BufferScale b2{0.4};
    int motion_cap = 3;
    int max_age = 30;
    int min_hits = 1;
    double match_floor = 0.0;

    // Switches for the ablation variants. The defaults are the full C-BIoU tracker.
    Similarity similarity = Similarity::BIoU;
    bool cascade = true;
    bool motion = true;

    /// Throws InvalidArgument on any out-of-range field, or b1 >= b2 while
    /// cascaded matching is on.
    void validate() const;
};

enum class TrackStatus { Tentative, Confirmed, Terminated };

class Track {
public:
    Track(long id, const Detection& first, int motion_cap);

    long id() const noexcept { return id_; }
    const BoundingBox& state() const noexcept { return state_; }
    const MotionWindow& window() const noexcept { return window_; }
    int misses() const noexcept { return misses_; }
    int hits() const noexcept { return hits_; }
    TrackStatus status() const noexcept { return status_; }
    long last_frame() const noexcept { return observations_.back().frame; }
    const std::vector<TrackPoint>& observations() const noexcept { return observations_; }

private:
    friend class Tracker;

    long id_;
    BoundingBox state_;
    MotionWindow window_;
    int misses_ = 0;
    int hits_ = 1;
    TrackStatus status_ = TrackStatus::Tentative;
    std::vector<TrackPoint> observations_;
};

/// A confirmed track's box at one frame.
struct TrackedBox {
    long frame;
    long id;
    BoundingBox box;
    double score;

    friend bool operator==(const TrackedBox&, const TrackedBox&) = default;
};

/// How a track was matched in the last step; round is 1 or 2.
struct MatchRecord {
    long track_id;
    std::size_t detection;
    int round;
    BoundingBox predicted;
};

/// Cascaded buffered-IoU tracker over one sequence.
///
/// Each step predicts every alive track by its averaged recent motion, then
/// matches tracks to detections with the small buffer b1 and matches the
/// leftovers with the large buffer b2. Unmatched detections start tracks;
/// tracks unmatched for more than max_age frames are terminated.
///
/// Not thread-safe; one instance per sequence.
class Tracker {
public:
    explicit Tracker(TrackerConfig config);

    /// Frames must be strictly increasing across calls. Returns the boxes
    /// emitted at this step ordered by (frame, id); frames earlier than
    /// `frame` appear only when a tentative track is confirmed.
    std::vector<TrackedBox> step(long frame, std::span<const Detection> detections);

    /// Confirmed tracks so far, alive or terminated, as tracklets sorted by id.
    std::vector<Tracklet> tracklets() const;

    const TrackerConfig& config() const noexcept { return config_; }
    const std::vector<Track>& alive() const noexcept { return alive_; }
    const std::vector<MatchRecord>& last_matches() const noexcept { return last_matches_; }

private:
    TrackerConfig config_;
    long next_id_ = 1;
    long last_frame_ = 0;
    std::vector<Track> alive_;
    std::vector<Track> finished_;
    std::vector<MatchRecord> last_matches_;
};

/// Runs a tracker over every frame from the first to the last detection
/// frame (frames without detections included) and returns the tracklets of
/// all confirmed tracks.
std::vector<Tracklet> run_sequence(const DetectionsByFrame& detections, const TrackerConfig& config);

}  // namespace cbiou
