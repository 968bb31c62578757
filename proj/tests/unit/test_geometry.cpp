#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cbiou/error.hpp"
#include "cbiou/geometry.hpp"
#include "oracles.hpp"

namespace cbiou {
namespace {

BoundingBox random_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(-200.0, 800.0);
    std::uniform_real_distribution<double> size(1.0, 300.0);
    return {pos(rng), pos(rng), size(rng), size(rng)};
}

TEST(BoundingBox, RejectsNonPositiveExtent) {
    EXPECT_THROW(BoundingBox(0, 0, 0, 10), InvalidArgument);
    EXPECT_THROW(BoundingBox(0, 0, 10, -1), InvalidArgument);
    EXPECT_THROW(BoundingBox(NAN, 0, 10, 10), InvalidArgument);
    EXPECT_THROW(BoundingBox(0, INFINITY, 10, 10), InvalidArgument);
}

TEST(BufferScale, RangeIsZeroToTwo) {
    EXPECT_NO_THROW(BufferScale(0.0));
    EXPECT_NO_THROW(BufferScale(2.0));
    EXPECT_THROW(BufferScale(-0.1), InvalidArgument);
    EXPECT_THROW(BufferScale(2.01), InvalidArgument);
    EXPECT_THROW(BufferScale(NAN), InvalidArgument);
}

TEST(BufferBox, ZeroBufferIsIdentity) {
    const BoundingBox box(0, 0, 10, 10);
    EXPECT_EQ(buffer_box(box, BufferScale(0.0)), box);
}

TEST(BufferBox, HalfBuffer) {
    const BoundingBox b = buffer_box({0, 0, 10, 10}, BufferScale(0.5));
    EXPECT_DOUBLE_EQ(b.x(), -5.0);
    EXPECT_DOUBLE_EQ(b.y(), -5.0);
    EXPECT_DOUBLE_EQ(b.w(), 20.0);
    EXPECT_DOUBLE_EQ(b.h(), 20.0);
}

TEST(BufferBox, FractionalBox) {
    // x - 0.3*4, y - 0.3*2, 4 + 2*0.3*4, 2 + 2*0.3*2
    const BoundingBox b = buffer_box({3, 7, 4, 2}, BufferScale(0.3));
    EXPECT_NEAR(b.x(), 1.8, 1e-12);
    EXPECT_NEAR(b.y(), 6.4, 1e-12);
    EXPECT_NEAR(b.w(), 6.4, 1e-12);
    EXPECT_NEAR(b.h(), 3.2, 1e-12);
}

TEST(Iou, Basics) {
    const BoundingBox a(0, 0, 10, 10);
    EXPECT_EQ(iou(a, a), 1.0);
    EXPECT_EQ(iou(a, {100, 100, 10, 10}), 0.0);
    // intersection 50, union 150
    EXPECT_NEAR(iou(a, {5, 0, 10, 10}), 1.0 / 3.0, 1e-15);
    // touching edges do not overlap
    EXPECT_EQ(iou(a, {10, 0, 10, 10}), 0.0);
}

TEST(Biou, ZeroBufferEqualsIou) {
    const BoundingBox a(0, 0, 10, 10), c(4, 3, 7, 12);
    EXPECT_EQ(biou(a, c, BufferScale(0.0)), iou(a, c));
}

TEST(Biou, BridgesSmallGap) {
    const BoundingBox a(0, 0, 10, 10), c(12, 0, 10, 10);
    EXPECT_EQ(biou(a, c, BufferScale(0.0)), 0.0);
    const double expected = oracle::buffered_iou(a, c, 0.3);
    EXPECT_GT(expected, 0.0);
    EXPECT_NEAR(biou(a, c, BufferScale(0.3)), expected, 1e-15);
}

TEST(Biou, IdenticalBoxesStayOne) {
    const BoundingBox a(3, 4, 5, 6);
    for (double b : {0.0, 0.1, 0.7, 2.0}) {
        EXPECT_NEAR(biou(a, a, BufferScale(b)), 1.0, 1e-15);
    }
}

TEST(Giou, Basics) {
    const BoundingBox a(0, 0, 10, 10);
    EXPECT_EQ(giou(a, a), 1.0);
    // hull equals union, so no penalty
    EXPECT_NEAR(giou(a, {5, 0, 10, 10}), 1.0 / 3.0, 1e-15);
    const double far = giou(a, {1000, 1000, 10, 10});
    EXPECT_LT(far, 0.0);
    EXPECT_GT(far, -1.0);
    EXPECT_LT(far, -0.99);
}

TEST(Diou, Basics) {
    const BoundingBox a(0, 0, 10, 10);
    EXPECT_EQ(diou(a, a), 1.0);
    // centers 10 apart, hull 20 x 10 -> diagonal^2 = 500
    EXPECT_NEAR(diou(a, {10, 0, 10, 10}), -0.2, 1e-15);
    const BoundingBox big(-5, -5, 20, 20);
    EXPECT_NEAR(diou(a, big), iou(a, big), 1e-15);
}

TEST(GeometryProperties, RandomPairs) {
    std::mt19937_64 rng(20221023);
    std::uniform_real_distribution<double> scale(0.0, 2.0);
    for (int i = 0; i < 2000; ++i) {
        const BoundingBox a = random_box(rng);
        const BoundingBox c = random_box(rng);
        const BufferScale b(scale(rng));

        const BoundingBox ab = buffer_box(a, b);
        EXPECT_NEAR(ab.center_x(), a.center_x(), 1e-12);
        EXPECT_NEAR(ab.center_y(), a.center_y(), 1e-12);
        EXPECT_NEAR(ab.w() / ab.h(), a.w() / a.h(), 1e-12 * (a.w() / a.h()));

        EXPECT_EQ(iou(a, c), iou(c, a));
        EXPECT_EQ(biou(a, c, b), biou(c, a, b));
        EXPECT_EQ(giou(a, c), giou(c, a));
        EXPECT_EQ(diou(a, c), diou(c, a));

        EXPECT_GE(iou(a, c), 0.0);
        EXPECT_LE(iou(a, c), 1.0);
        EXPECT_GE(biou(a, c, b), 0.0);
        EXPECT_LE(biou(a, c, b), 1.0);
        EXPECT_GE(giou(a, c), -1.0);
        EXPECT_LE(giou(a, c), 1.0);
        EXPECT_GE(diou(a, c), -1.0);
        EXPECT_LE(diou(a, c), 1.0);

        EXPECT_NEAR(biou(a, c, b), oracle::buffered_iou(a, c, b.value()), 1e-12);
    }
}

TEST(GeometryProperties, BiouGrowsWithBuffer) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> scale(0.0, 2.0);
    for (int i = 0; i < 2000; ++i) {
        const BoundingBox a = random_box(rng);
        const BoundingBox c = random_box(rng);
        double lo = scale(rng);
        double hi = scale(rng);
        if (hi < lo) std::swap(lo, hi);
        EXPECT_LE(biou(a, c, BufferScale(lo)), biou(a, c, BufferScale(hi)) + 1e-12);
    }
}

}  // namespace
}  // namespace cbiou
