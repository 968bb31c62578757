#include "cbiou/tracklet.hpp"

#include <string>

#include "cbiou/error.hpp"

namespace cbiou {

std::vector<long> Tracklet::frames() const {
    std::vector<long> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.frame);
    return out;
}

void Tracklet::validate() const {
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].frame <= points[i - 1].frame) {
            throw InvalidArgument("tracklet " + std::to_string(id) +
                                  ": frames must be strictly increasing");
        }
    }
    if (features.empty()) return;
    if (features.size() != points.size()) {
        throw InvalidArgument("tracklet " + std::to_string(id) + ": " +
                              std::to_string(features.size()) + " feature vectors for " +
                              std::to_string(points.size()) + " frames");
    }
    for (const auto& f : features) {
        double norm2 = 0.0;
        for (double v : f) norm2 += v * v;
        if (!(norm2 > 0.0)) {
            throw InvalidArgument("tracklet " + std::to_string(id) + ": zero-norm feature vector");
        }
    }
}

}  // namespace cbiou
