#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbiou/metrics.hpp"
#include "cbiou/tracker.hpp"
#include "cbiou/tracklet.hpp"

namespace cbiou {

// MOTChallenge text formats. Fields are comma separated; blank lines and
// lines starting with '#' are skipped; LF and CRLF line endings are accepted.
//
//   detections:   frame,-1,x,y,w,h,score[,...]
//   ground truth: frame,id,x,y,w,h[,flag[,...]]   rows with flag 0 are ignored
//   results:      frame,id,x,y,w,h,score,-1,-1,-1

/// Detections grouped by frame; out-of-order lines are accepted. Throws
/// ParseError carrying the 1-based line number on a malformed record.
DetectionsByFrame parse_detections(std::istream& in);
DetectionsByFrame parse_detections(const std::filesystem::path& path);

FrameAnnotations parse_ground_truth(std::istream& in);
FrameAnnotations parse_ground_truth(const std::filesystem::path& path);

/// Result rows grouped into tracklets by id, sorted by id, each sorted by frame.
std::vector<Tracklet> parse_results(std::istream& in);
std::vector<Tracklet> parse_results(const std::filesystem::path& path);

/// One line per observation ordered by (frame, id); coordinates with two
/// decimals, scores with four. Gap frames produce no lines.
void write_results(std::ostream& out, std::span<const Tracklet> tracklets);
void write_results(const std::filesystem::path& path, std::span<const Tracklet> tracklets);

void write_detections(std::ostream& out, const DetectionsByFrame& detections);
void write_detections(const std::filesystem::path& path, const DetectionsByFrame& detections);

void write_ground_truth(std::ostream& out, const FrameAnnotations& gt);
void write_ground_truth(const std::filesystem::path& path, const FrameAnnotations& gt);

/// Appearance vectors keyed by (frame, index). For tracker output the index
/// is the track id. Text form: a "d=<dim>" header line, then
/// "frame,index,v1,...,vd" per row.
struct EmbeddingTable {
    std::size_t dim = 0;
    std::map<std::pair<long, long>, FeatureVector> rows;
};

EmbeddingTable parse_embeddings(std::istream& in);
EmbeddingTable parse_embeddings(const std::filesystem::path& path);
void write_embeddings(std::ostream& out, const EmbeddingTable& table);
void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);

/// Copies the vector for (frame, tracklet id) onto every point. Throws
/// MissingFeatures when a tracklet has no row for one of its frames.
void attach_features(std::span<Tracklet> tracklets, const EmbeddingTable& table);

inline constexpr double kDefaultNmsThreshold = 0.7;

/// Greedy NMS: by descending score, keep a detection unless its IoU with an
/// already kept one exceeds `threshold`. Equal scores keep input order.
std::vector<Detection> nms(std::span<const Detection> detections, double threshold);

/// Pools every set frame by frame and applies nms to each frame.
DetectionsByFrame nms_merge(std::span<const DetectionsByFrame> sets,
                            double threshold = kDefaultNmsThreshold);

}  // namespace cbiou
