#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "cbiou/tracklet.hpp"

namespace cbiou {

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// Appearance distance between two tracklets: infinite when their frame sets
/// intersect, otherwise the mean cosine distance over all cross-frame feature
/// pairs. Throws MissingFeatures if either tracklet has none.
double tracklet_distance(const Tracklet& a, const Tracklet& b);

/// Symmetric matrix of tracklet distances, zero on the diagonal.
class TrackletDistanceMatrix {
public:
    explicit TrackletDistanceMatrix(std::size_t n = 0) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }

private:
    std::size_t n_;
    std::vector<double> d_;
};

TrackletDistanceMatrix distance_matrix(std::span<const Tracklet> tracklets);

/// Tracklet id -> cluster id (the smallest member id).
using Clustering = std::map<long, long>;

inline constexpr double kDefaultMergeThreshold = 0.4;

/// Greedy average-linkage agglomeration over a precomputed matrix.
///
/// Clusters start as singletons. Each round merges the pair with the smallest
/// average of cross-member distances, provided that average is below
/// `threshold` and no cross-member distance is infinite. Equal averages are
/// resolved toward the lexicographically smallest (min id, min id) pair.
Clustering cluster(std::span<const long> ids, const TrackletDistanceMatrix& distances,
                   double threshold);

Clustering cluster(std::span<const Tracklet> tracklets, double threshold = kDefaultMergeThreshold);

/// Fuses each cluster into a single tracklet carrying the smallest member id.
/// Output is sorted by id. Throws InconsistentCluster when two members of a
/// cluster share a frame.
std::vector<Tracklet> relabel(std::span<const Tracklet> tracklets, const Clustering& clustering);

/// cluster followed by relabel.
std::vector<Tracklet> refine(std::span<const Tracklet> tracklets,
                             double threshold = kDefaultMergeThreshold);

}  // namespace cbiou
