#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cbiou/error.hpp"
#include "cbiou/metrics.hpp"
#include "cbiou/scene.hpp"
#include "cbiou/tracker.hpp"

namespace cbiou {
namespace {

TrackerConfig iou_tracker() {
    TrackerConfig c;
    c.b1 = BufferScale(0.0);
    c.cascade = false;
    c.motion = false;
    return c;
}

DetectionsByFrame static_object(long first, long last, BoundingBox box) {
    DetectionsByFrame d;
    for (long f = first; f <= last; ++f) d[f].emplace_back(f, box, 0.9);
    return d;
}

/// Random crowd of boxes drifting with per-object velocity and jitter.
DetectionsByFrame random_scene(std::uint64_t seed, int objects, long frames) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(0, 1000), vel(-15, 15), size(20, 60), noise(-2, 2),
        coin(0, 1);
    struct Obj {
        double x, y, w, h, vx, vy;
    };
    std::vector<Obj> objs;
    for (int i = 0; i < objects; ++i) objs.push_back({pos(rng), pos(rng), size(rng), size(rng), vel(rng), vel(rng)});
    DetectionsByFrame d;
    for (long f = 1; f <= frames; ++f) {
        for (auto& o : objs) {
            o.x += o.vx;
            o.y += o.vy;
            if (coin(rng) < 0.1) continue;
            d[f].emplace_back(f, BoundingBox(o.x + noise(rng), o.y + noise(rng), o.w, o.h), coin(rng));
        }
    }
    return d;
}

TEST(TrackerConfig, Validation) {
    TrackerConfig c;
    EXPECT_NO_THROW(c.validate());
    c.b1 = BufferScale(0.5);
    c.b2 = BufferScale(0.3);
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.b2 = BufferScale(0.5);
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.cascade = false;
    EXPECT_NO_THROW(c.validate());

    TrackerConfig d;
    d.motion_cap = 6;
    EXPECT_THROW(d.validate(), InvalidArgument);
    d = {};
    d.max_age = 0;
    EXPECT_THROW(d.validate(), InvalidArgument);
    d = {};
    d.min_hits = 0;
    EXPECT_THROW(d.validate(), InvalidArgument);
    d = {};
    d.match_floor = 1.0;
    EXPECT_THROW(d.validate(), InvalidArgument);
}

TEST(Detection, Validation) {
    EXPECT_THROW(Detection(0, {0, 0, 1, 1}, 0.5), InvalidArgument);
    EXPECT_THROW(Detection(1, {0, 0, 1, 1}, 1.5), InvalidArgument);
}

TEST(Tracker, RejectsOutOfOrderFrames) {
    Tracker t(TrackerConfig{});
    t.step(3, {});
    EXPECT_THROW(t.step(3, {}), OutOfOrderFrame);
    EXPECT_THROW(t.step(2, {}), OutOfOrderFrame);
}

TEST(RunSequence, EmptyInput) { EXPECT_TRUE(run_sequence({}, TrackerConfig{}).empty()); }

TEST(RunSequence, StaticObjectKeepsOneId) {
    const auto out = run_sequence(static_object(1, 10, {50, 50, 20, 40}), TrackerConfig{});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].id, 1);
    EXPECT_EQ(out[0].size(), 10u);
    EXPECT_EQ(out[0].points[0].score, 0.9);
}

TEST(RunSequence, TwoSeparatedStaticObjects) {
    auto d = static_object(1, 20, {0, 0, 20, 20});
    for (auto& [f, v] : static_object(1, 20, {500, 500, 20, 20})) d[f].push_back(v[0]);
    const auto out = run_sequence(d, TrackerConfig{});
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].size(), 20u);
    EXPECT_EQ(out[1].size(), 20u);
}

TEST(RunSequence, JumpingObjectNeedsBuffers) {
    // displacement 1.2 widths per frame: iou = 0, biou(0.3) > 0
    DetectionsByFrame d;
    for (long f = 1; f <= 10; ++f) d[f].emplace_back(f, BoundingBox(48.0 * f, 0, 40, 80));
    EXPECT_GE(run_sequence(d, iou_tracker()).size(), 2u);

    TrackerConfig c;
    c.b1 = BufferScale(0.3);
    c.b2 = BufferScale(0.4);
    const auto out = run_sequence(d, c);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].size(), 10u);
}

TEST(RunSequence, TerminationAfterMaxAge) {
    TrackerConfig c;
    c.max_age = 3;
    // missing 4 = max_age + 1 frames
    auto d = static_object(1, 5, {0, 0, 20, 20});
    for (auto& [f, v] : static_object(10, 12, {0, 0, 20, 20})) d[f] = v;
    auto out = run_sequence(d, c);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[1].id, 2);
    EXPECT_EQ(out[1].first_frame(), 10);

    // missing exactly max_age frames keeps the identity
    d = static_object(1, 5, {0, 0, 20, 20});
    for (auto& [f, v] : static_object(9, 12, {0, 0, 20, 20})) d[f] = v;
    out = run_sequence(d, c);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].size(), 9u);  // no boxes for the gap
}

TEST(Tracker, TentativeTracksAreEmittedRetroactively) {
    TrackerConfig c;
    c.min_hits = 3;
    Tracker t(c);
    const BoundingBox box(0, 0, 20, 20);
    for (long f = 1; f <= 2; ++f) {
        const std::vector<Detection> d = {Detection(f, box)};
        EXPECT_TRUE(t.step(f, d).empty());
    }
    const std::vector<Detection> d3 = {Detection(3, box)};
    const auto out = t.step(3, d3);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].frame, 1);
    EXPECT_EQ(out[2].frame, 3);
    const std::vector<Detection> d4 = {Detection(4, box)};
    EXPECT_EQ(t.step(4, d4).size(), 1u);
}

TEST(Tracker, UnconfirmedTracksAreDropped) {
    TrackerConfig c;
    c.min_hits = 3;
    c.max_age = 1;
    const auto out = run_sequence(static_object(1, 2, {0, 0, 10, 10}), c);
    EXPECT_TRUE(out.empty());
}

TEST(Tracker, UnmatchedStateFollowsMotion) {
    TrackerConfig c;
    Tracker t(c);
    for (long f = 1; f <= 4; ++f) {
        const std::vector<Detection> d = {Detection(f, BoundingBox(10.0 * f, 0, 40, 40))};
        t.step(f, d);
    }
    t.step(5, {});
    t.step(6, {});
    ASSERT_EQ(t.alive().size(), 1u);
    const Track& tr = t.alive()[0];
    EXPECT_EQ(tr.misses(), 2);
    const BoundingBox expect =
        predict_state(tr.window().last().box, average_motion(tr.window()), tr.misses());
    EXPECT_EQ(tr.state(), expect);
    EXPECT_DOUBLE_EQ(tr.state().x(), 60.0);
}

TEST(TrackerProperties, OneToOneAndCascadeDominance) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto scene = random_scene(seed, 12, 40);
        TrackerConfig c;
        Tracker t(c);
        std::set<std::pair<long, long>> emitted;
        for (const auto& [frame, dets] : scene) {
            for (const auto& b : t.step(frame, dets)) {
                EXPECT_TRUE(emitted.insert({b.frame, b.id}).second);
            }
            std::set<long> ids;
            std::set<std::size_t> used;
            for (const auto& m : t.last_matches()) {
                EXPECT_TRUE(ids.insert(m.track_id).second);
                EXPECT_TRUE(used.insert(m.detection).second);
                const BoundingBox& det = dets[m.detection].box;
                if (m.round == 1) {
                    EXPECT_GT(biou(m.predicted, det, c.b1), c.match_floor);
                } else {
                    EXPECT_LE(biou(m.predicted, det, c.b1), c.match_floor);
                    EXPECT_GT(biou(m.predicted, det, c.b2), c.match_floor);
                }
            }
        }
    }
}

TEST(TrackerProperties, Deterministic) {
    const auto scene = random_scene(99, 15, 60);
    EXPECT_EQ(run_sequence(scene, TrackerConfig{}), run_sequence(scene, TrackerConfig{}));
}

TEST(TrackerProperties, ZeroBufferWithoutMotionIsPlainIou) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto scene = random_scene(seed, 10, 50);
        TrackerConfig plain = iou_tracker();
        plain.similarity = Similarity::IoU;
        EXPECT_EQ(run_sequence(scene, iou_tracker()), run_sequence(scene, plain));
    }
}

TEST(RunSequence, FastDancerScene) {
    const Scene scene = generate_scene(parse_scene(std::filesystem::path(CBIOU_SCENE_DIR) / "teleport.scene"));
    const auto out = run_sequence(scene.detections, TrackerConfig{});
    EXPECT_EQ(out.size(), 2u);
    EXPECT_EQ(idf1(scene.ground_truth, to_annotations(out)), 1.0);
}

}  // namespace
}  // namespace cbiou
