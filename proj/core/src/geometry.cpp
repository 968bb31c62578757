#include "cbiou/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cbiou/error.hpp"

namespace cbiou {

BoundingBox::BoundingBox(double x, double y, double w, double h) : x_(x), y_(y), w_(w), h_(h) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) || !std::isfinite(h)) {
        throw InvalidArgument("bounding box fields must be finite");
    }
    if (!(w > 0.0) || !(h > 0.0)) {
        throw InvalidArgument("bounding box extent must be positive, got w=" + std::to_string(w) +
                              " h=" + std::to_string(h));
    }
}

BufferScale::BufferScale(double b) : b_(b) {
    if (!std::isfinite(b) || b < 0.0 || b > kMax) {
        throw InvalidArgument("buffer scale must lie in [0, 2], got " + std::to_string(b));
    }
}

BoundingBox buffer_box(const BoundingBox& box, BufferScale scale) noexcept {
    const double b = scale.value();
    const double bw = b * box.w();
    const double bh = b * box.h();
    return {box.x() - bw, box.y() - bh, box.w() + 2.0 * bw, box.h() + 2.0 * bh};
}

double intersection_area(const BoundingBox& a, const BoundingBox& c) noexcept {
    const double iw = std::min(a.right(), c.right()) - std::max(a.x(), c.x());
    const double ih = std::min(a.bottom(), c.bottom()) - std::max(a.y(), c.y());
    if (iw <= 0.0 || ih <= 0.0) {
        return 0.0;
    }
    return iw * ih;
}

double iou(const BoundingBox& a, const BoundingBox& c) noexcept {
    const double inter = intersection_area(a, c);
    if (inter <= 0.0) {
        return 0.0;
    }
    const double uni = a.area() + c.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double biou(const BoundingBox& a, const BoundingBox& c, BufferScale b) noexcept {
    if (b.value() == 0.0) {
        return iou(a, c);
    }
    return iou(buffer_box(a, b), buffer_box(c, b));
}

namespace {

struct Hull {
    double x0, y0, x1, y1;
};

Hull enclosing_hull(const BoundingBox& a, const BoundingBox& c) noexcept {
    return {std::min(a.x(), c.x()), std::min(a.y(), c.y()), std::max(a.right(), c.right()),
            std::max(a.bottom(), c.bottom())};
}

}  // namespace

double giou(const BoundingBox& a, const BoundingBox& c) noexcept {
    const double inter = intersection_area(a, c);
    const double uni = a.area() + c.area() - inter;
    const Hull hull = enclosing_hull(a, c);
    const double hull_area = (hull.x1 - hull.x0) * (hull.y1 - hull.y0);
    const double value = inter / uni - (hull_area - uni) / hull_area;
    return std::clamp(value, -1.0, 1.0);
}

double diou(const BoundingBox& a, const BoundingBox& c) noexcept {
    const Hull hull = enclosing_hull(a, c);
    const double dx = a.center_x() - c.center_x();
    const double dy = a.center_y() - c.center_y();
    const double hw = hull.x1 - hull.x0;
    const double hh = hull.y1 - hull.y0;
    const double value = iou(a, c) - (dx * dx + dy * dy) / (hw * hw + hh * hh);
    return std::clamp(value, -1.0, 1.0);
}

}  // namespace cbiou
