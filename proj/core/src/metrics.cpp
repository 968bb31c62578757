#include "cbiou/metrics.hpp"

#include <cmath>
#include <set>
#include <string>

#include <fmt/format.h>

#include "cbiou/assignment.hpp"
#include "cbiou/error.hpp"

namespace cbiou {

namespace {

const std::vector<Annotation> kNoAnnotations;

const std::vector<Annotation>& at_frame(const FrameAnnotations& frames, long frame) {
    auto it = frames.find(frame);
    return it == frames.end() ? kNoAnnotations : it->second;
}

std::set<long> all_frames(const FrameAnnotations& a, const FrameAnnotations& b) {
    std::set<long> out;
    for (const auto& [f, _] : a) out.insert(f);
    for (const auto& [f, _] : b) out.insert(f);
    return out;
}

std::vector<BoundingBox> boxes_of(const std::vector<Annotation>& anns) {
    std::vector<BoundingBox> out;
    out.reserve(anns.size());
    for (const auto& a : anns) out.push_back(a.box);
    return out;
}

long box_count(const FrameAnnotations& frames) {
    long n = 0;
    for (const auto& [_, anns] : frames) n += static_cast<long>(anns.size());
    return n;
}

std::map<long, long> boxes_per_id(const FrameAnnotations& frames) {
    std::map<long, long> out;
    for (const auto& [_, anns] : frames) {
        for (const auto& a : anns) ++out[a.id];
    }
    return out;
}

}  // namespace

void validate_annotations(const FrameAnnotations& frames) {
    for (const auto& [frame, anns] : frames) {
        std::set<long> seen;
        for (const auto& a : anns) {
            if (!seen.insert(a.id).second) {
                throw InvalidArgument("identity " + std::to_string(a.id) + " appears twice in frame " +
                                      std::to_string(frame));
            }
        }
    }
}

FrameAnnotations to_annotations(std::span<const Tracklet> tracklets) {
    FrameAnnotations out;
    for (const auto& t : tracklets) {
        for (const auto& p : t.points) out[p.frame].push_back({t.id, p.box});
    }
    return out;
}

FrameMatch match_frame(std::span<const BoundingBox> gt, std::span<const BoundingBox> pred,
                       double alpha) {
    CostMatrix cost(gt.size(), pred.size(), CostMatrix::kForbidden);
    for (std::size_t g = 0; g < gt.size(); ++g) {
        for (std::size_t p = 0; p < pred.size(); ++p) {
            const double v = iou(gt[g], pred[p]);
            if (v >= alpha) cost(g, p) = 1.0 - v;
        }
    }
    Assignment a = solve_assignment(cost);
    FrameMatch out;
    out.pairs = std::move(a.matches);
    out.false_negatives = a.unmatched_rows.size();
    out.false_positives = a.unmatched_cols.size();
    return out;
}

ClearCounts clear_counts(const FrameAnnotations& gt, const FrameAnnotations& pred, double alpha) {
    ClearCounts c;
    std::map<long, long> last_match;  // gt id -> predicted id at its previous matched frame
    for (long frame : all_frames(gt, pred)) {
        const auto& g = at_frame(gt, frame);
        const auto& p = at_frame(pred, frame);
        const auto gb = boxes_of(g);
        const auto pb = boxes_of(p);
        const FrameMatch m = match_frame(gb, pb, alpha);
        c.gt += static_cast<long>(g.size());
        c.tp += static_cast<long>(m.pairs.size());
        c.fp += static_cast<long>(m.false_positives);
        c.fn += static_cast<long>(m.false_negatives);
        for (const auto& [gi, pi] : m.pairs) {
            const long gid = g[gi].id;
            const long pid = p[pi].id;
            auto it = last_match.find(gid);
            if (it != last_match.end() && it->second != pid) ++c.idsw;
            last_match[gid] = pid;
        }
    }
    return c;
}

double mota(const FrameAnnotations& gt, const FrameAnnotations& pred, double alpha) {
    const ClearCounts c = clear_counts(gt, pred, alpha);
    if (c.gt == 0) throw NoGroundTruth();
    return 1.0 - static_cast<double>(c.fn + c.fp + c.idsw) / static_cast<double>(c.gt);
}

IdentityCounts identity_counts(const FrameAnnotations& gt, const FrameAnnotations& pred,
                               double alpha) {
    const auto gt_sizes = boxes_per_id(gt);
    const auto pred_sizes = boxes_per_id(pred);
    std::map<long, std::size_t> gt_index;
    for (const auto& [id, _] : gt_sizes) gt_index.emplace(id, gt_index.size());
    std::map<long, std::size_t> pred_index;
    for (const auto& [id, _] : pred_sizes) pred_index.emplace(id, pred_index.size());

    // Frames in which each (gt id, predicted id) pair overlaps by at least alpha.
    CostMatrix overlap(gt_index.size(), pred_index.size(), 0.0);
    for (const auto& [frame, g] : gt) {
        const auto& p = at_frame(pred, frame);
        for (const auto& ga : g) {
            for (const auto& pa : p) {
                if (iou(ga.box, pa.box) >= alpha) {
                    overlap(gt_index[ga.id], pred_index[pa.id]) -= 1.0;
                }
            }
        }
    }
    const Assignment a = solve_assignment(overlap);

    IdentityCounts c;
    c.idtp = static_cast<long>(std::llround(-a.cost));
    c.idfn = box_count(gt) - c.idtp;
    c.idfp = box_count(pred) - c.idtp;
    return c;
}

double idf1(const FrameAnnotations& gt, const FrameAnnotations& pred, double alpha) {
    const IdentityCounts c = identity_counts(gt, pred, alpha);
    const long denom = 2 * c.idtp + c.idfp + c.idfn;
    if (denom == 0) return 0.0;
    return 2.0 * static_cast<double>(c.idtp) / static_cast<double>(denom);
}

std::array<double, 19> hota_thresholds() {
    std::array<double, 19> out{};
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(k + 1) / 20.0;
    return out;
}

HotaScores hota_at(const FrameAnnotations& gt, const FrameAnnotations& pred, double alpha) {
    const auto gt_sizes = boxes_per_id(gt);
    const auto pred_sizes = boxes_per_id(pred);

    long tp = 0;
    long fp = 0;
    long fn = 0;
    std::map<std::pair<long, long>, long> pair_tp;
    for (long frame : all_frames(gt, pred)) {
        const auto& g = at_frame(gt, frame);
        const auto& p = at_frame(pred, frame);
        const auto gb = boxes_of(g);
        const auto pb = boxes_of(p);
        const FrameMatch m = match_frame(gb, pb, alpha);
        tp += static_cast<long>(m.pairs.size());
        fp += static_cast<long>(m.false_positives);
        fn += static_cast<long>(m.false_negatives);
        for (const auto& [gi, pi] : m.pairs) ++pair_tp[{g[gi].id, p[pi].id}];
    }

    HotaScores s;
    const long det_denom = tp + fp + fn;
    s.deta = det_denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(det_denom);
    if (tp > 0) {
        double weighted = 0.0;
        for (const auto& [key, tpa] : pair_tp) {
            const long fna = gt_sizes.at(key.first) - tpa;
            const long fpa = pred_sizes.at(key.second) - tpa;
            const double a = static_cast<double>(tpa) / static_cast<double>(tpa + fna + fpa);
            weighted += static_cast<double>(tpa) * a;
        }
        s.assa = weighted / static_cast<double>(tp);
    }
    s.hota = std::sqrt(s.deta * s.assa);
    return s;
}

HotaScores hota(const FrameAnnotations& gt, const FrameAnnotations& pred) {
    HotaScores mean;
    const auto alphas = hota_thresholds();
    for (double alpha : alphas) {
        const HotaScores s = hota_at(gt, pred, alpha);
        mean.hota += s.hota;
        mean.deta += s.deta;
        mean.assa += s.assa;
    }
    const double n = static_cast<double>(alphas.size());
    mean.hota /= n;
    mean.deta /= n;
    mean.assa /= n;
    return mean;
}

MetricReport evaluate(const FrameAnnotations& gt, const FrameAnnotations& pred) {
    validate_annotations(gt);
    validate_annotations(pred);
    const ClearCounts c = clear_counts(gt, pred, 0.5);
    if (c.gt == 0) throw NoGroundTruth();

    MetricReport r;
    const HotaScores h = hota(gt, pred);
    r.hota = h.hota;
    r.deta = h.deta;
    r.assa = h.assa;
    r.mota = 1.0 - static_cast<double>(c.fn + c.fp + c.idsw) / static_cast<double>(c.gt);
    r.idf1 = idf1(gt, pred, 0.5);
    r.tp = c.tp;
    r.fp = c.fp;
    r.fn = c.fn;
    r.idsw = c.idsw;
    return r;
}

std::string format_text(const MetricReport& r) {
    std::string out = fmt::format("{:>6} {:>6} {:>6} {:>6} {:>6} {:>7} {:>7} {:>7} {:>5}\n", "HOTA",
                                  "DetA", "AssA", "MOTA", "IDF1", "TP", "FP", "FN", "IDSW");
    out += fmt::format("{:>6.1f} {:>6.1f} {:>6.1f} {:>6.1f} {:>6.1f} {:>7} {:>7} {:>7} {:>5}\n",
                       100.0 * r.hota, 100.0 * r.deta, 100.0 * r.assa, 100.0 * r.mota,
                       100.0 * r.idf1, r.tp, r.fp, r.fn, r.idsw);
    return out;
}

std::string format_key_value(const MetricReport& r) {
    return fmt::format(
        "hota={:.6f}\ndeta={:.6f}\nassa={:.6f}\nmota={:.6f}\nidf1={:.6f}\ntp={}\nfp={}\nfn={}\n"
        "idsw={}\n",
        r.hota, r.deta, r.assa, r.mota, r.idf1, r.tp, r.fp, r.fn, r.idsw);
}

}  // namespace cbiou
