#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cbiou/error.hpp"
#include "cbiou/refiner.hpp"
#include "oracles.hpp"

namespace cbiou {
namespace {

Tracklet make(long id, long first, long last, FeatureVector f = {1.0, 0.0}) {
    Tracklet t;
    t.id = id;
    for (long fr = first; fr <= last; ++fr) {
        t.points.push_back({fr, BoundingBox(0, 0, 10, 10)});
        t.features.push_back(f);
    }
    return t;
}

TrackletDistanceMatrix matrix_of(const std::vector<std::vector<double>>& d) {
    TrackletDistanceMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) m.set(i, j, d[i][j]);
    }
    return m;
}

TEST(TrackletDistance, OverlappingFramesAreInfinite) {
    EXPECT_EQ(tracklet_distance(make(1, 1, 10), make(2, 5, 15)), kInfiniteDistance);
}

TEST(TrackletDistance, IdenticalFeaturesAreZero) {
    EXPECT_EQ(tracklet_distance(make(1, 1, 10), make(2, 11, 15)), 0.0);
}

TEST(TrackletDistance, MeanOverAllPairs) {
    Tracklet a;
    a.id = 1;
    a.points = {{1, BoundingBox(0, 0, 1, 1)}, {2, BoundingBox(0, 0, 1, 1)}};
    a.features = {{1.0, 0.0}, {0.0, 1.0}};
    const Tracklet b = make(2, 5, 5, {1.0, 0.0});
    EXPECT_DOUBLE_EQ(tracklet_distance(a, b), 0.5);
}

TEST(TrackletDistance, Errors) {
    Tracklet bare = make(3, 20, 25);
    bare.features.clear();
    EXPECT_THROW(tracklet_distance(make(1, 1, 2), bare), MissingFeatures);
    EXPECT_THROW(tracklet_distance(make(1, 1, 2), make(2, 5, 6, {1.0, 0.0, 0.0})), InvalidArgument);
}

TEST(TrackletDistanceProperties, SymmetricScaleInvariantBounded) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 50.0);
    auto random_tracklet = [&](long id, long first, long len) {
        Tracklet t;
        t.id = id;
        for (long f = first; f < first + len; ++f) {
            t.points.push_back({f, BoundingBox(0, 0, 1, 1)});
            t.features.push_back({n(rng), n(rng), n(rng), n(rng)});
        }
        return t;
    };
    for (int trial = 0; trial < 500; ++trial) {
        const Tracklet a = random_tracklet(1 + trial % 3, 1, 1 + trial % 5);
        const Tracklet b = random_tracklet(5, 20, 1 + trial % 7);
        const double d = tracklet_distance(a, b);
        EXPECT_EQ(d, tracklet_distance(b, a));
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, 2.0);
        Tracklet scaled = a;
        const double s = scale(rng);
        for (auto& f : scaled.features) {
            for (auto& v : f) v *= s;
        }
        EXPECT_NEAR(tracklet_distance(scaled, b), d, 1e-12);
    }
}

TEST(Cluster, AllInfiniteStaysApart) {
    const std::vector<long> ids = {1, 2, 3};
    const auto m = matrix_of({{0, kInfiniteDistance, kInfiniteDistance},
                              {kInfiniteDistance, 0, kInfiniteDistance},
                              {kInfiniteDistance, kInfiniteDistance, 0}});
    const Clustering c = cluster(ids, m, 0.4);
    EXPECT_EQ(c, (Clustering{{1, 1}, {2, 2}, {3, 3}}));
}

TEST(Cluster, CloseTracksMerge) {
    const std::vector<long> ids = {4, 9};
    const Clustering c = cluster(ids, matrix_of({{0, 0.1}, {0.1, 0}}), 0.4);
    EXPECT_EQ(c, (Clustering{{4, 4}, {9, 4}}));
    EXPECT_EQ(cluster(ids, matrix_of({{0, 0.4}, {0.4, 0}}), 0.4), (Clustering{{4, 4}, {9, 9}}));
}

TEST(Cluster, OverlapVetoBlocksTransitiveMerge) {
    // A{1-5}, B{10-15}, C{12-20}
    const std::vector<long> ids = {1, 2, 3};
    const auto m = matrix_of({{0, 0.1, 0.05}, {0.1, 0, kInfiniteDistance}, {0.05, kInfiniteDistance, 0}});
    EXPECT_EQ(cluster(ids, m, 0.4), (Clustering{{1, 1}, {2, 2}, {3, 1}}));
}

TEST(Cluster, SizeMismatchThrows) {
    const std::vector<long> ids = {1, 2};
    EXPECT_THROW(cluster(ids, TrackletDistanceMatrix(3), 0.4), InvalidArgument);
}

std::vector<std::vector<double>> random_distances(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 0.8);
    std::bernoulli_distribution inf(0.25);
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // dyadic values keep averages exact
            d[i][j] = d[j][i] = inf(rng) ? kInfiniteDistance : std::round(u(rng) * 64.0) / 64.0;
        }
    }
    return d;
}

TEST(ClusterProperties, MatchesReferenceAndRespectsVeto) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const auto d = random_distances(rng, n);
        std::vector<long> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<long>(10 * (n - i));
        const Clustering got = cluster(ids, matrix_of(d), 0.4);
        EXPECT_EQ(got, oracle::reference_cluster(ids, d, 0.4)) << "trial " << trial;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && std::isinf(d[i][j])) EXPECT_NE(got.at(ids[i]), got.at(ids[j]));
            }
        }
    }
}

TEST(ClusterProperties, LargerThresholdNeverSplits) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const auto d = random_distances(rng, n);
        std::vector<long> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<long>(i + 1);
        const auto m = matrix_of(d);
        for (double lo : {0.1, 0.2, 0.3}) {
            const double hi = lo + 0.2;
            const Clustering a = cluster(ids, m, lo);
            const Clustering b = cluster(ids, m, hi);
            bool nested = true;
            for (long x : ids) {
                for (long y : ids) {
                    if (a.at(x) == a.at(y) && b.at(x) != b.at(y)) nested = false;
                }
            }
            EXPECT_TRUE(nested) << "threshold " << hi << " split a cluster found at " << lo;
        }
    }
}

TEST(Relabel, SingletonsAreUnchanged) {
    const std::vector<Tracklet> ts = {make(1, 1, 5), make(2, 3, 8)};
    EXPECT_EQ(relabel(ts, {{1, 1}, {2, 2}}), ts);
    EXPECT_EQ(relabel(ts, {}), ts);
}

TEST(Relabel, UnionOfFramesWithMinId) {
    const std::vector<Tracklet> ts = {make(7, 1, 5), make(3, 12, 20)};
    const auto out = relabel(ts, {{7, 3}, {3, 3}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].id, 3);
    EXPECT_EQ(out[0].size(), 14u);
    EXPECT_EQ(out[0].first_frame(), 1);
    EXPECT_EQ(out[0].last_frame(), 20);
    EXPECT_EQ(out[0].features.size(), 14u);
}

TEST(Relabel, OverlappingClusterThrows) {
    const std::vector<Tracklet> ts = {make(1, 1, 5), make(2, 5, 8)};
    EXPECT_THROW(relabel(ts, {{1, 1}, {2, 1}}), InconsistentCluster);
}

TEST(Refine, MergesSplitIdentityOnly) {
    const std::vector<Tracklet> ts = {make(1, 1, 10, {1, 0}), make(2, 21, 30, {1, 0}),
                                      make(3, 11, 20, {0, 1})};
    const auto out = refine(ts, 0.4);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].id, 1);
    EXPECT_EQ(out[0].size(), 20u);
    EXPECT_EQ(out[1].id, 3);
}

}  // namespace
}  // namespace cbiou
