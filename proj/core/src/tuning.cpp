#include "cbiou/tuning.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cbiou/error.hpp"

namespace cbiou {

MetricReport evaluate_config(const Sequence& seq, const TrackerConfig& config) {
    const auto tracklets = run_sequence(seq.detections, config);
    return evaluate(seq.ground_truth, to_annotations(tracklets));
}

double objective_value(const MetricReport& report, Objective objective) {
    switch (objective) {
        case Objective::HOTA:
            return report.hota;
        case Objective::IDF1:
            return report.idf1;
        case Objective::MOTA:
            return report.mota;
    }
    return report.hota;
}

std::vector<std::pair<double, double>> GridSearchSpec::combinations() const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (values[i] < values[j]) out.emplace_back(values[i], values[j]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t select_best(std::span<const TuneRow> table) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (table[i].score > table[best].score) best = i;
    }
    return best;
}

TuneResult tune(std::span<const Sequence> sequences, const GridSearchSpec& grid,
                const TrackerConfig& base) {
    if (sequences.empty()) throw NoGroundTruth();

    TuneResult result;
    for (const auto& [b1, b2] : grid.combinations()) {
        TrackerConfig config = base;
        config.b1 = BufferScale(b1);
        config.b2 = BufferScale(b2);

        MetricReport mean;
        for (const Sequence& seq : sequences) {
            const MetricReport r = evaluate_config(seq, config);
            mean.hota += r.hota;
            mean.deta += r.deta;
            mean.assa += r.assa;
            mean.mota += r.mota;
            mean.idf1 += r.idf1;
            mean.tp += r.tp;
            mean.fp += r.fp;
            mean.fn += r.fn;
            mean.idsw += r.idsw;
        }
        const double n = static_cast<double>(sequences.size());
        mean.hota /= n;
        mean.deta /= n;
        mean.assa /= n;
        mean.mota /= n;
        mean.idf1 /= n;
        result.table.push_back({b1, b2, mean, objective_value(mean, grid.objective)});
    }
    result.best = select_best(result.table);
    return result;
}

std::vector<AblationRow> ablate(const Sequence& seq, const TrackerConfig& base) {
    struct Variant {
        const char* name;
        Similarity similarity;
        bool cascade;
        bool motion;
    };
    static constexpr Variant kVariants[] = {
        {"IoU", Similarity::IoU, false, false},
        {"GIoU", Similarity::GIoU, false, false},
        {"DIoU", Similarity::DIoU, false, false},
        {"BIoU", Similarity::BIoU, false, false},
        {"C-BIoU", Similarity::BIoU, true, false},
        {"C-BIoU+motion", Similarity::BIoU, true, true},
    };

    std::vector<AblationRow> rows;
    for (const Variant& v : kVariants) {
        TrackerConfig config = base;
        config.similarity = v.similarity;
        config.cascade = v.cascade;
        config.motion = v.motion;
        rows.push_back({v.name, config, evaluate_config(seq, config)});
    }
    return rows;
}

std::string format_tune_table(const TuneResult& result, Objective objective) {
    const char* label = objective == Objective::HOTA   ? "HOTA"
                        : objective == Objective::IDF1 ? "IDF1"
                                                       : "MOTA";
    std::string out = fmt::format("{:>4} {:>4} {:>6} {:>6} {:>6} {:>6} {:>6}  objective={}\n", "b1",
                                  "b2", "HOTA", "DetA", "AssA", "MOTA", "IDF1", label);
    for (std::size_t i = 0; i < result.table.size(); ++i) {
        const TuneRow& row = result.table[i];
        const MetricReport& r = row.report;
        out += fmt::format("{:>4.1f} {:>4.1f} {:>6.1f} {:>6.1f} {:>6.1f} {:>6.1f} {:>6.1f}{}\n", row.b1,
                           row.b2, 100.0 * r.hota, 100.0 * r.deta, 100.0 * r.assa, 100.0 * r.mota,
                           100.0 * r.idf1, i == result.best ? "  *" : "");
    }
    const TuneRow& best = result.best_row();
    out += fmt::format("best b1={:.1f} b2={:.1f}\n", best.b1, best.b2);
    return out;
}

std::string format_ablation_table(std::span<const AblationRow> rows) {
    std::string out = fmt::format("{:<14} {:>4} {:>4} {:>6} {:>6} {:>6} {:>6} {:>6}\n", "tracker", "C.M.",
                                  "Mo.", "HOTA", "DetA", "AssA", "MOTA", "IDF1");
    for (const auto& row : rows) {
        const MetricReport& r = row.report;
        out += fmt::format("{:<14} {:>4} {:>4} {:>6.1f} {:>6.1f} {:>6.1f} {:>6.1f} {:>6.1f}\n", row.name,
                           row.config.cascade ? "yes" : "no", row.config.motion ? "yes" : "no",
                           100.0 * r.hota, 100.0 * r.deta, 100.0 * r.assa, 100.0 * r.mota,
                           100.0 * r.idf1);
    }
    return out;
}

}  // namespace cbiou
