#include "cbiou/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "cbiou/error.hpp"

namespace cbiou {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double to_real(std::string_view s, std::size_t line, const char* field) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError(line, fmt::format("{} is not a number: '{}'", field, s));
    }
    return v;
}

long to_integer(std::string_view s, std::size_t line, const char* field) {
    // Some writers emit integral fields as reals ("1.0").
    const double v = to_real(s, line, field);
    if (v != std::floor(v)) {
        throw ParseError(line, fmt::format("{} must be an integer: '{}'", field, s));
    }
    return static_cast<long>(v);
}

/// Calls fn(fields, line_number) for each non-blank, non-comment line.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string_view s = trim(raw);
        if (s.empty() || s.front() == '#') continue;
        fn(split_fields(s), line);
    }
}

void require_fields(const std::vector<std::string_view>& f, std::size_t n, std::size_t line) {
    if (f.size() < n) {
        throw ParseError(line, fmt::format("expected at least {} fields, got {}", n, f.size()));
    }
}

BoundingBox box_fields(const std::vector<std::string_view>& f, std::size_t line) {
    const double x = to_real(f[2], line, "x");
    const double y = to_real(f[3], line, "y");
    const double w = to_real(f[4], line, "w");
    const double h = to_real(f[5], line, "h");
    if (!(w > 0.0) || !(h > 0.0)) {
        throw ParseError(line, fmt::format("box extent must be positive (w={}, h={})", w, h));
    }
    return {x, y, w, h};
}

long frame_field(std::string_view s, std::size_t line) {
    const long frame = to_integer(s, line, "frame");
    if (frame < 1) throw ParseError(line, fmt::format("frame must be >= 1, got {}", frame));
    return frame;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace

DetectionsByFrame parse_detections(std::istream& in) {
    DetectionsByFrame out;
    for_each_record(in, [&](const std::vector<std::string_view>& f, std::size_t line) {
        require_fields(f, 7, line);
        const long frame = frame_field(f[0], line);
        const BoundingBox box = box_fields(f, line);
        const double score = to_real(f[6], line, "score");
        if (score < 0.0 || score > 1.0) {
            throw ParseError(line, fmt::format("score must lie in [0, 1], got {}", score));
        }
        out[frame].emplace_back(frame, box, score);
    });
    return out;
}

DetectionsByFrame parse_detections(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_detections(in);
}

FrameAnnotations parse_ground_truth(std::istream& in) {
    FrameAnnotations out;
    for_each_record(in, [&](const std::vector<std::string_view>& f, std::size_t line) {
        require_fields(f, 6, line);
        const long frame = frame_field(f[0], line);
        const long id = to_integer(f[1], line, "id");
        const BoundingBox box = box_fields(f, line);
        if (f.size() > 6 && to_real(f[6], line, "flag") == 0.0) return;
        auto& anns = out[frame];
        if (std::any_of(anns.begin(), anns.end(), [&](const Annotation& a) { return a.id == id; })) {
            throw ParseError(line, fmt::format("identity {} repeats in frame {}", id, frame));
        }
        anns.push_back({id, box});
    });
    return out;
}

FrameAnnotations parse_ground_truth(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_ground_truth(in);
}

std::vector<Tracklet> parse_results(std::istream& in) {
    std::map<long, Tracklet> by_id;
    std::map<std::pair<long, long>, std::size_t> seen;
    for_each_record(in, [&](const std::vector<std::string_view>& f, std::size_t line) {
        require_fields(f, 7, line);
        const long frame = frame_field(f[0], line);
        const long id = to_integer(f[1], line, "id");
        const BoundingBox box = box_fields(f, line);
        const double score = to_real(f[6], line, "score");
        if (auto [it, fresh] = seen.emplace(std::pair{frame, id}, line); !fresh) {
            throw ParseError(line, fmt::format("duplicate (frame {}, id {}), first seen on line {}",
                                               frame, id, it->second));
        }
        Tracklet& t = by_id[id];
        t.id = id;
        t.points.push_back({frame, box, score});
    });

    std::vector<Tracklet> out;
    out.reserve(by_id.size());
    for (auto& [_, t] : by_id) {
        std::stable_sort(t.points.begin(), t.points.end(),
                         [](const TrackPoint& a, const TrackPoint& b) { return a.frame < b.frame; });
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Tracklet> parse_results(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_results(in);
}

void write_results(std::ostream& out, std::span<const Tracklet> tracklets) {
    struct Row {
        long frame;
        long id;
        const TrackPoint* point;
    };
    std::vector<Row> rows;
    for (const auto& t : tracklets) {
        for (const auto& p : t.points) rows.push_back({p.frame, t.id, &p});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
    });
    for (const auto& r : rows) {
        const auto& b = r.point->box;
        out << fmt::format("{},{},{:.2f},{:.2f},{:.2f},{:.2f},{:.4f},-1,-1,-1\n", r.frame, r.id, b.x(),
                           b.y(), b.w(), b.h(), r.point->score);
    }
}

void write_results(const std::filesystem::path& path, std::span<const Tracklet> tracklets) {
    auto out = open_out(path);
    write_results(out, tracklets);
}

void write_detections(std::ostream& out, const DetectionsByFrame& detections) {
    for (const auto& [frame, dets] : detections) {
        for (const auto& d : dets) {
            out << fmt::format("{},-1,{:.2f},{:.2f},{:.2f},{:.2f},{:.4f}\n", frame, d.box.x(), d.box.y(),
                               d.box.w(), d.box.h(), d.score);
        }
    }
}

void write_detections(const std::filesystem::path& path, const DetectionsByFrame& detections) {
    auto out = open_out(path);
    write_detections(out, detections);
}

void write_ground_truth(std::ostream& out, const FrameAnnotations& gt) {
    for (const auto& [frame, anns] : gt) {
        std::vector<const Annotation*> sorted;
        for (const auto& a : anns) sorted.push_back(&a);
        std::sort(sorted.begin(), sorted.end(),
                  [](const Annotation* a, const Annotation* b) { return a->id < b->id; });
        for (const Annotation* a : sorted) {
            out << fmt::format("{},{},{:.2f},{:.2f},{:.2f},{:.2f},1,1,1\n", frame, a->id, a->box.x(),
                               a->box.y(), a->box.w(), a->box.h());
        }
    }
}

void write_ground_truth(const std::filesystem::path& path, const FrameAnnotations& gt) {
    auto out = open_out(path);
    write_ground_truth(out, gt);
}

EmbeddingTable parse_embeddings(std::istream& in) {
    EmbeddingTable table;
    bool have_header = false;
    for_each_record(in, [&](const std::vector<std::string_view>& f, std::size_t line) {
        if (!have_header) {
            if (f.size() != 1 || !f[0].starts_with("d=")) {
                throw ParseError(line, "embedding file must start with a 'd=<dim>' header");
            }
            const long dim = to_integer(trim(f[0].substr(2)), line, "dimension");
            if (dim < 1) throw ParseError(line, "embedding dimension must be >= 1");
            table.dim = static_cast<std::size_t>(dim);
            have_header = true;
            return;
        }
        if (f.size() != table.dim + 2) {
            throw ParseError(line, fmt::format("expected {} fields, got {}", table.dim + 2, f.size()));
        }
        const long frame = frame_field(f[0], line);
        const long index = to_integer(f[1], line, "index");
        FeatureVector v;
        v.reserve(table.dim);
        double norm2 = 0.0;
        for (std::size_t i = 2; i < f.size(); ++i) {
            v.push_back(to_real(f[i], line, "feature"));
            norm2 += v.back() * v.back();
        }
        if (!(norm2 > 0.0)) throw ParseError(line, "feature vector has zero norm");
        if (!table.rows.emplace(std::pair{frame, index}, std::move(v)).second) {
            throw ParseError(line, fmt::format("duplicate key ({}, {})", frame, index));
        }
    });
    if (!have_header) throw ParseError(0, "embedding file is empty");
    return table;
}

EmbeddingTable parse_embeddings(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_embeddings(in);
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
    out << "d=" << table.dim << '\n';
    for (const auto& [key, v] : table.rows) {
        out << key.first << ',' << key.second;
        for (double x : v) out << ',' << fmt::format("{}", x);
        out << '\n';
    }
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
    auto out = open_out(path);
    write_embeddings(out, table);
}

void attach_features(std::span<Tracklet> tracklets, const EmbeddingTable& table) {
    for (auto& t : tracklets) {
        std::vector<FeatureVector> features;
        features.reserve(t.points.size());
        for (const auto& p : t.points) {
            auto it = table.rows.find({p.frame, t.id});
            if (it == table.rows.end()) throw MissingFeatures(t.id);
            features.push_back(it->second);
        }
        t.features = std::move(features);
    }
}

std::vector<Detection> nms(std::span<const Detection> detections, double threshold) {
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].score > detections[b].score;
    });
    std::vector<Detection> kept;
    for (std::size_t i : order) {
        const Detection& d = detections[i];
        const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            return iou(k.box, d.box) > threshold;
        });
        if (!suppressed) kept.push_back(d);
    }
    return kept;
}

DetectionsByFrame nms_merge(std::span<const DetectionsByFrame> sets, double threshold) {
    std::map<long, std::vector<Detection>> pooled;
    for (const auto& set : sets) {
        for (const auto& [frame, dets] : set) {
            auto& p = pooled[frame];
            p.insert(p.end(), dets.begin(), dets.end());
        }
    }
    DetectionsByFrame out;
    for (const auto& [frame, dets] : pooled) out[frame] = nms(dets, threshold);
    return out;
}

}  // namespace cbiou
