#include "cbiou/refiner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cbiou/error.hpp"

namespace cbiou {

namespace {

double dot(const FeatureVector& a, const FeatureVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool frames_intersect(const Tracklet& a, const Tracklet& b) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.points.size() && j < b.points.size()) {
        const long fa = a.points[i].frame;
        const long fb = b.points[j].frame;
        if (fa == fb) return true;
        if (fa < fb) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

}  // namespace

double tracklet_distance(const Tracklet& lhs, const Tracklet& rhs) {
    if (!lhs.has_features()) throw MissingFeatures(lhs.id);
    if (!rhs.has_features()) throw MissingFeatures(rhs.id);
    if (lhs.points.empty() || rhs.points.empty()) {
        throw InvalidArgument("tracklet distance needs non-empty tracklets");
    }
    if (frames_intersect(lhs, rhs)) return kInfiniteDistance;

    // Fixed summation order so that d(a, b) and d(b, a) agree bit for bit.
    const bool swap = std::pair{rhs.id, rhs.first_frame()} < std::pair{lhs.id, lhs.first_frame()};
    const Tracklet& a = swap ? rhs : lhs;
    const Tracklet& b = swap ? lhs : rhs;

    std::vector<double> norm_a;
    norm_a.reserve(a.features.size());
    for (const auto& f : a.features) norm_a.push_back(std::sqrt(dot(f, f)));
    std::vector<double> norm_b;
    norm_b.reserve(b.features.size());
    for (const auto& f : b.features) norm_b.push_back(std::sqrt(dot(f, f)));

    for (const auto& f : b.features) {
        if (f.size() != a.features.front().size()) {
            throw InvalidArgument("feature dimensions differ between tracklets " +
                                  std::to_string(a.id) + " and " + std::to_string(b.id));
        }
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < a.features.size(); ++i) {
        for (std::size_t j = 0; j < b.features.size(); ++j) {
            sum += 1.0 - dot(a.features[i], b.features[j]) / (norm_a[i] * norm_b[j]);
        }
    }
    const double n = static_cast<double>(a.features.size()) * static_cast<double>(b.features.size());
    return std::clamp(sum / n, 0.0, 2.0);
}

TrackletDistanceMatrix distance_matrix(std::span<const Tracklet> tracklets) {
    TrackletDistanceMatrix m(tracklets.size());
    for (std::size_t i = 0; i < tracklets.size(); ++i) {
        for (std::size_t j = i + 1; j < tracklets.size(); ++j) {
            m.set(i, j, tracklet_distance(tracklets[i], tracklets[j]));
        }
    }
    return m;
}

Clustering cluster(std::span<const long> ids, const TrackletDistanceMatrix& distances,
                   double threshold) {
    if (ids.size() != distances.size()) {
        throw InvalidArgument("cluster: id count does not match matrix size");
    }

    // Each live cluster: its member indices and its smallest id.
    struct Group {
        std::vector<std::size_t> members;
        long label;
    };
    std::vector<Group> groups;
    groups.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) groups.push_back({{i}, ids[i]});

    auto linkage = [&](const Group& a, const Group& b) {
        double sum = 0.0;
        for (std::size_t i : a.members) {
            for (std::size_t j : b.members) {
                const double d = distances(i, j);
                if (std::isinf(d)) return kInfiniteDistance;
                sum += d;
            }
        }
        return sum / static_cast<double>(a.members.size() * b.members.size());
    };

    for (;;) {
        std::size_t best_a = 0;
        std::size_t best_b = 0;
        double best = kInfiniteDistance;
        std::pair<long, long> best_key{0, 0};
        for (std::size_t a = 0; a < groups.size(); ++a) {
            for (std::size_t b = a + 1; b < groups.size(); ++b) {
                const double d = linkage(groups[a], groups[b]);
                if (!(d < threshold)) continue;
                const std::pair<long, long> key{std::min(groups[a].label, groups[b].label),
                                                std::max(groups[a].label, groups[b].label)};
                if (d < best || (d == best && key < best_key)) {
                    best = d;
                    best_a = a;
                    best_b = b;
                    best_key = key;
                }
            }
        }
        if (std::isinf(best)) break;

        Group& keep = groups[best_a];
        Group& gone = groups[best_b];
        keep.members.insert(keep.members.end(), gone.members.begin(), gone.members.end());
        keep.label = std::min(keep.label, gone.label);
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best_b));
    }

    Clustering out;
    for (const auto& g : groups) {
        for (std::size_t i : g.members) out[ids[i]] = g.label;
    }
    return out;
}

Clustering cluster(std::span<const Tracklet> tracklets, double threshold) {
    std::vector<long> ids;
    ids.reserve(tracklets.size());
    for (const auto& t : tracklets) ids.push_back(t.id);
    return cluster(ids, distance_matrix(tracklets), threshold);
}

std::vector<Tracklet> relabel(std::span<const Tracklet> tracklets, const Clustering& clustering) {
    std::map<long, std::vector<const Tracklet*>> groups;
    for (const auto& t : tracklets) {
        auto it = clustering.find(t.id);
        const long label = it == clustering.end() ? t.id : it->second;
        groups[label].push_back(&t);
    }

    std::vector<Tracklet> out;
    out.reserve(groups.size());
    for (const auto& [label, members] : groups) {
        const bool with_features = std::all_of(members.begin(), members.end(),
                                               [](const Tracklet* t) { return t->has_features(); });
        std::vector<std::pair<TrackPoint, const FeatureVector*>> merged;
        for (const Tracklet* t : members) {
            for (std::size_t i = 0; i < t->points.size(); ++i) {
                merged.emplace_back(t->points[i], with_features ? &t->features[i] : nullptr);
            }
        }
        std::stable_sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) {
            return a.first.frame < b.first.frame;
        });

        Tracklet fused;
        fused.id = label;
        for (std::size_t i = 0; i < merged.size(); ++i) {
            if (i > 0 && merged[i].first.frame == merged[i - 1].first.frame) {
                throw InconsistentCluster(label, merged[i].first.frame);
            }
            fused.points.push_back(merged[i].first);
            if (with_features) fused.features.push_back(*merged[i].second);
        }
        out.push_back(std::move(fused));
    }
    return out;
}

std::vector<Tracklet> refine(std::span<const Tracklet> tracklets, double threshold) {
    return relabel(tracklets, cluster(tracklets, threshold));
}

}  // namespace cbiou
