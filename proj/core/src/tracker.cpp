#include "cbiou/tracker.hpp"

#include <algorithm>
#include <string>

#include "cbiou/error.hpp"

namespace cbiou {

Detection::Detection(long frame_, BoundingBox box_, double score_)
    : frame(frame_), box(box_), score(score_) {
    if (frame < 1) {
        throw InvalidArgument("detection frame must be >= 1, got " + std::to_string(frame));
    }
    if (!(score >= 0.0 && score <= 1.0)) {
        throw InvalidArgument("detection score must lie in [0, 1], got " + std::to_string(score));
    }
}

void TrackerConfig::validate() const {
    if (cascade && !(b1 < b2)) {
        throw InvalidArgument("cascaded matching requires b1 < b2, got b1=" +
                              std::to_string(b1.value()) + " b2=" + std::to_string(b2.value()));
    }
    if (motion_cap < MotionWindow::kMinCap || motion_cap > MotionWindow::kMaxCap) {
        throw InvalidArgument("motion_cap must lie in [2, 5], got " + std::to_string(motion_cap));
    }
    if (max_age < 1) {
        throw InvalidArgument("max_age must be >= 1, got " + std::to_string(max_age));
    }
    if (min_hits < 1) {
        throw InvalidArgument("min_hits must be >= 1, got " + std::to_string(min_hits));
    }
    if (!(match_floor >= 0.0 && match_floor < 1.0)) {
        throw InvalidArgument("match_floor must lie in [0, 1), got " + std::to_string(match_floor));
    }
}

Track::Track(long id, const Detection& first, int motion_cap)
    : id_(id), state_(first.box), window_(motion_cap) {
    window_.push(first.frame, first.box);
    observations_.push_back({first.frame, first.box, first.score});
}

Tracker::Tracker(TrackerConfig config) : config_(config) { config_.validate(); }

std::vector<TrackedBox> Tracker::step(long frame, std::span<const Detection> detections) {
    if (frame <= last_frame_) {
        throw OutOfOrderFrame(frame, last_frame_);
    }
    last_frame_ = frame;
    last_matches_.clear();

    std::vector<TrackedBox> emitted;
    auto emit = [&](const Track& t, const TrackPoint& p) {
        emitted.push_back({p.frame, t.id_, p.box, p.score});
    };

    for (auto& t : alive_) {
        const BoxDelta delta = config_.motion ? average_motion_or_zero(t.window_) : BoxDelta{};
        t.state_ = predict_state(t.window_.last().box, delta, frame - t.last_frame());
    }

    std::vector<BoundingBox> states;
    states.reserve(alive_.size());
    for (const auto& t : alive_) states.push_back(t.state_);
    std::vector<BoundingBox> boxes;
    boxes.reserve(detections.size());
    for (const auto& d : detections) boxes.push_back(d.box);

    Association first =
        associate(states, boxes, config_.similarity, config_.b1, config_.match_floor);
    std::vector<std::pair<std::size_t, std::size_t>> matches = first.matches;
    for (const auto& [ti, di] : first.matches) {
        last_matches_.push_back({alive_[ti].id_, di, 1, states[ti]});
    }
    std::vector<std::size_t> lost = std::move(first.unmatched_tracks);
    std::vector<std::size_t> fresh = std::move(first.unmatched_detections);

    if (config_.cascade && !lost.empty() && !fresh.empty()) {
        std::vector<BoundingBox> lost_states;
        for (std::size_t ti : lost) lost_states.push_back(states[ti]);
        std::vector<BoundingBox> fresh_boxes;
        for (std::size_t di : fresh) fresh_boxes.push_back(boxes[di]);

        Association second = associate(lost_states, fresh_boxes, config_.similarity, config_.b2,
                                       config_.match_floor);
        for (const auto& [li, fi] : second.matches) {
            matches.emplace_back(lost[li], fresh[fi]);
            last_matches_.push_back({alive_[lost[li]].id_, fresh[fi], 2, states[lost[li]]});
        }
        std::vector<std::size_t> still_lost;
        for (std::size_t li : second.unmatched_tracks) still_lost.push_back(lost[li]);
        std::vector<std::size_t> still_fresh;
        for (std::size_t fi : second.unmatched_detections) still_fresh.push_back(fresh[fi]);
        lost = std::move(still_lost);
        fresh = std::move(still_fresh);
    }

    for (const auto& [ti, di] : matches) {
        Track& t = alive_[ti];
        const Detection& d = detections[di];
        t.window_.push(frame, d.box);
        t.observations_.push_back({frame, d.box, d.score});
        t.state_ = d.box;
        t.misses_ = 0;
        ++t.hits_;
        if (t.status_ == TrackStatus::Confirmed) {
            emit(t, t.observations_.back());
        } else if (t.hits_ >= config_.min_hits) {
            t.status_ = TrackStatus::Confirmed;
            for (const auto& p : t.observations_) emit(t, p);
        }
    }

    for (std::size_t ti : lost) {
        Track& t = alive_[ti];
        t.misses_ = static_cast<int>(frame - t.last_frame());
        if (t.misses_ > config_.max_age) {
            t.status_ = TrackStatus::Terminated;
        }
    }

    std::sort(fresh.begin(), fresh.end());
    for (std::size_t di : fresh) {
        Track t(next_id_++, detections[di], config_.motion_cap);
        if (config_.min_hits <= 1) {
            t.status_ = TrackStatus::Confirmed;
            emit(t, t.observations_.back());
        }
        alive_.push_back(std::move(t));
    }

    auto dead = std::stable_partition(alive_.begin(), alive_.end(), [](const Track& t) {
        return t.status_ != TrackStatus::Terminated;
    });
    for (auto it = dead; it != alive_.end(); ++it) {
        // Tracks that never reached confirmation leave no trace.
        if (it->hits_ >= config_.min_hits) finished_.push_back(std::move(*it));
    }
    alive_.erase(dead, alive_.end());

    std::sort(emitted.begin(), emitted.end(), [](const TrackedBox& a, const TrackedBox& b) {
        return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
    });
    return emitted;
}

std::vector<Tracklet> Tracker::tracklets() const {
    std::vector<Tracklet> out;
    auto collect = [&](const Track& t) {
        if (t.status_ == TrackStatus::Tentative) return;
        out.push_back({t.id_, t.observations_, {}});
    };
    for (const auto& t : finished_) collect(t);
    for (const auto& t : alive_) collect(t);
    std::sort(out.begin(), out.end(),
              [](const Tracklet& a, const Tracklet& b) { return a.id < b.id; });
    return out;
}

std::vector<Tracklet> run_sequence(const DetectionsByFrame& detections, const TrackerConfig& config) {
    Tracker tracker(config);
    if (detections.empty()) return {};
    const long first = detections.begin()->first;
    const long last = detections.rbegin()->first;
    const std::vector<Detection> none;
    for (long frame = first; frame <= last; ++frame) {
        auto it = detections.find(frame);
        tracker.step(frame, it == detections.end() ? none : it->second);
    }
    return tracker.tracklets();
}

}  // namespace cbiou
