#pragma once

#include <cstddef>
#include <deque>

#include "cbiou/geometry.hpp"

namespace cbiou {

/// Per-frame displacement of the four box components.
struct BoxDelta {
    double dx = 0.0;
    double dy = 0.0;
    double dw = 0.0;
    double dh = 0.0;

    friend bool operator==(const BoxDelta&, const BoxDelta&) = default;
};

struct Observation {
    long frame;
    BoundingBox box;
};

/// The most recent matched observations of one track, enough to form at most
/// `cap` displacements. Unmatched frames never enter the window.
class MotionWindow {
public:
    static constexpr int kMinCap = 2;
    static constexpr int kMaxCap = 5;

    explicit MotionWindow(int cap = 3);

    /// Appends a matched observation, evicting the oldest one beyond cap + 1.
    /// Throws OutOfOrderFrame unless `frame` exceeds the last stored frame.
    void push(long frame, const BoundingBox& box);

    int cap() const noexcept { return cap_; }
    std::size_t size() const noexcept { return history_.size(); }
    bool empty() const noexcept { return history_.empty(); }
    const std::deque<Observation>& history() const noexcept { return history_; }
    const Observation& last() const { return history_.back(); }

private:
    int cap_;
    std::deque<Observation> history_;
};

/// Mean per-frame displacement over the last min(cap, size - 1) stored
/// displacements. A displacement between matches k frames apart is divided
/// by k. Throws InsufficientHistory with fewer than two observations.
BoxDelta average_motion(const MotionWindow& window);

/// Like average_motion, but yields zero motion for short windows.
BoxDelta average_motion_or_zero(const MotionWindow& window) noexcept;

inline constexpr double kMinExtent = 1e-3;

/// Extrapolates `last` by `gap` frames of constant motion. Extents are
/// clamped from below at `min_extent`. gap == 0 returns `last` unchanged.
BoundingBox predict_state(const BoundingBox& last, const BoxDelta& delta, long gap,
                          double min_extent = kMinExtent);

}  // namespace cbiou
