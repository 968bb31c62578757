#pragma once

namespace cbiou {

/// Axis-aligned box in top-left / width / height form, pixel units.
///
/// Construction rejects non-finite fields and non-positive extents, so every
/// BoundingBox in the program has a strictly positive area.
class BoundingBox {
public:
    BoundingBox(double x, double y, double w, double h);

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double w() const noexcept { return w_; }
    double h() const noexcept { return h_; }

    double right() const noexcept { return x_ + w_; }
    double bottom() const noexcept { return y_ + h_; }
    double center_x() const noexcept { return x_ + 0.5 * w_; }
    double center_y() const noexcept { return y_ + 0.5 * h_; }
    double area() const noexcept { return w_ * h_; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

private:
    double x_;
    double y_;
    double w_;
    double h_;
};

/// Proportional buffer applied on every side of a box, 0 <= b <= 2.
class BufferScale {
public:
    static constexpr double kMax = 2.0;

    constexpr BufferScale() = default;
    explicit BufferScale(double b);

    constexpr double value() const noexcept { return b_; }

    friend auto operator<=>(const BufferScale&, const BufferScale&) = default;

private:
    double b_ = 0.0;
};

/// Expands `box` by `b` times its own width/height on each side. The center
/// and aspect ratio are unchanged; both extents grow by a factor of (1 + 2b).
BoundingBox buffer_box(const BoundingBox& box, BufferScale b) noexcept;

double intersection_area(const BoundingBox& a, const BoundingBox& c) noexcept;

/// Intersection over union, in [0, 1].
double iou(const BoundingBox& a, const BoundingBox& c) noexcept;

/// IoU of the two boxes after both are buffered by the same scale.
double biou(const BoundingBox& a, const BoundingBox& c, BufferScale b) noexcept;

/// Generalized IoU: iou minus the fraction of the enclosing hull not covered
/// by the union. In [-1, 1].
double giou(const BoundingBox& a, const BoundingBox& c) noexcept;

/// Distance IoU: iou minus squared center distance over squared hull diagonal.
double diou(const BoundingBox& a, const BoundingBox& c) noexcept;

}  // namespace cbiou
