#include "cbiou/motion.hpp"

#include <algorithm>
#include <string>

#include "cbiou/error.hpp"

namespace cbiou {

MotionWindow::MotionWindow(int cap) : cap_(cap) {
    if (cap < kMinCap || cap > kMaxCap) {
        throw InvalidArgument("motion window cap must lie in [2, 5], got " + std::to_string(cap));
    }
}

void MotionWindow::push(long frame, const BoundingBox& box) {
    if (!history_.empty() && frame <= history_.back().frame) {
        throw OutOfOrderFrame(frame, history_.back().frame);
    }
    history_.push_back({frame, box});
    while (history_.size() > static_cast<std::size_t>(cap_) + 1) {
        history_.pop_front();
    }
}

BoxDelta average_motion(const MotionWindow& window) {
    const auto& h = window.history();
    if (h.size() < 2) {
        throw InsufficientHistory();
    }
    const std::size_t n = std::min<std::size_t>(window.cap(), h.size() - 1);
    BoxDelta sum;
    for (std::size_t i = h.size() - n; i < h.size(); ++i) {
        const auto& prev = h[i - 1];
        const auto& cur = h[i];
        const double span = static_cast<double>(cur.frame - prev.frame);
        sum.dx += (cur.box.x() - prev.box.x()) / span;
        sum.dy += (cur.box.y() - prev.box.y()) / span;
        sum.dw += (cur.box.w() - prev.box.w()) / span;
        sum.dh += (cur.box.h() - prev.box.h()) / span;
    }
    const double count = static_cast<double>(n);
    return {sum.dx / count, sum.dy / count, sum.dw / count, sum.dh / count};
}

BoxDelta average_motion_or_zero(const MotionWindow& window) noexcept {
    if (window.size() < 2) {
        return {};
    }
    return average_motion(window);
}

BoundingBox predict_state(const BoundingBox& last, const BoxDelta& delta, long gap,
                          double min_extent) {
    if (gap < 0) {
        throw InvalidArgument("prediction gap must be non-negative");
    }
    if (gap == 0) {
        return last;
    }
    const double g = static_cast<double>(gap);
    return {last.x() + g * delta.dx, last.y() + g * delta.dy,
            std::max(min_extent, last.w() + g * delta.dw),
            std::max(min_extent, last.h() + g * delta.dh)};
}

}  // namespace cbiou
