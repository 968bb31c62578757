#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbiou/metrics.hpp"
#include "cbiou/tracker.hpp"

namespace cbiou {

/// A detection sequence with its ground truth.
struct Sequence {
    std::string name;
    DetectionsByFrame detections;
    FrameAnnotations ground_truth;
};

/// Runs the tracker on `seq` and scores it. Throws NoGroundTruth when the
/// sequence has no ground-truth boxes.
MetricReport evaluate_config(const Sequence& seq, const TrackerConfig& config);

enum class Objective { HOTA, IDF1, MOTA };

double objective_value(const MetricReport& report, Objective objective);

/// Buffer values 0.1 .. 0.7 in 0.1 steps, scored on pairs with b1 < b2.
struct GridSearchSpec {
    std::vector<double> values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    Objective objective = Objective::HOTA;

    /// All (b1, b2) with b1 < b2, ordered by b1 then b2.
    std::vector<std::pair<double, double>> combinations() const;
};

struct TuneRow {
    double b1;
    double b2;
    MetricReport report;  // mean over sequences
    double score;
};

struct TuneResult {
    std::vector<TuneRow> table;
    std::size_t best = 0;

    const TuneRow& best_row() const { return table.at(best); }
};

/// Index of the highest score in `table`; equal scores resolve to the
/// earliest row, i.e. the smallest (b1, b2).
std::size_t select_best(std::span<const TuneRow> table);

/// Grid search over buffer pairs. Every field of `base` other than b1 and
/// b2 is held fixed. Throws NoGroundTruth on an empty or unlabelled input.
TuneResult tune(std::span<const Sequence> sequences, const GridSearchSpec& grid,
                const TrackerConfig& base);

struct AblationRow {
    std::string name;
    TrackerConfig config;
    MetricReport report;
};

/// Scores the unified tracker with each similarity (IoU, GIoU, DIoU, BIoU;
/// single round, no motion), then BIoU with cascaded matching, then
/// cascaded matching plus motion. Single-round variants use `base.b1`.
std::vector<AblationRow> ablate(const Sequence& seq, const TrackerConfig& base);

std::string format_tune_table(const TuneResult& result, Objective objective);
std::string format_ablation_table(std::span<const AblationRow> rows);

}  // namespace cbiou
