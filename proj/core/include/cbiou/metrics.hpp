#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbiou/geometry.hpp"
#include "cbiou/tracklet.hpp"

namespace cbiou {

struct Annotation {
    long id;
    BoundingBox box;

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Per-frame labelled boxes; used for ground truth and predictions alike.
using FrameAnnotations = std::map<long, std::vector<Annotation>>;

/// Throws InvalidArgument if an identity repeats within a frame.
void validate_annotations(const FrameAnnotations& frames);

FrameAnnotations to_annotations(std::span<const Tracklet> tracklets);

struct FrameMatch {
    /// (gt index, prediction index)
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
};

/// Matches as many pairs with IoU >= alpha as possible, then maximizes total IoU.
FrameMatch match_frame(std::span<const BoundingBox> gt, std::span<const BoundingBox> pred,
                       double alpha);

struct ClearCounts {
    long gt = 0;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
};

ClearCounts clear_counts(const FrameAnnotations& gt, const FrameAnnotations& pred,
                         double alpha = 0.5);

/// 1 - (FN + FP + IDSW) / |gt|. Can be negative. Throws NoGroundTruth when
/// the ground truth holds no boxes.
double mota(const FrameAnnotations& gt, const FrameAnnotations& pred, double alpha = 0.5);

struct IdentityCounts {
    long idtp = 0;
    long idfp = 0;
    long idfn = 0;
};

IdentityCounts identity_counts(const FrameAnnotations& gt, const FrameAnnotations& pred,
                               double alpha = 0.5);

/// Identity F1 under the best one-to-one mapping of gt ids to predicted ids.
double idf1(const FrameAnnotations& gt, const FrameAnnotations& pred, double alpha = 0.5);

struct HotaScores {
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
};

/// 0.05, 0.10, ..., 0.95
std::array<double, 19> hota_thresholds();

HotaScores hota_at(const FrameAnnotations& gt, const FrameAnnotations& pred, double alpha);

/// HOTA, DetA and AssA, each averaged over hota_thresholds(). AssA is 0 at a
/// threshold with no true positives.
HotaScores hota(const FrameAnnotations& gt, const FrameAnnotations& pred);

struct MetricReport {
    double hota = 0.0;
    double deta = 0.0;
    double assa = 0.0;
    double mota = 0.0;
    double idf1 = 0.0;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
};

MetricReport evaluate(const FrameAnnotations& gt, const FrameAnnotations& pred);

/// Percentages with one decimal, one header row and one value row.
std::string format_text(const MetricReport& report);

/// key=value per line, fixed six-decimal fractions.
std::string format_key_value(const MetricReport& report);

}  // namespace cbiou
