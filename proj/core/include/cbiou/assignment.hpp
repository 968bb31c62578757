#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "cbiou/geometry.hpp"

namespace cbiou {

/// Dense row-major cost matrix. An entry equal to kForbidden may not be matched.
class CostMatrix {
public:
    static constexpr double kForbidden = std::numeric_limits<double>::infinity();

    CostMatrix() = default;
    CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Assignment {
    /// (row, col) pairs sorted by row.
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    std::vector<std::size_t> unmatched_rows;
    std::vector<std::size_t> unmatched_cols;
    /// Sum of the matched entries.
    double cost = 0.0;
};

/// Optimal rectangular linear assignment. Among all one-to-one matchings that
/// use only non-forbidden entries, returns one with the largest number of
/// pairs, and among those the smallest total cost. Costs must be finite or
/// kForbidden.
Assignment solve_assignment(const CostMatrix& cost);

/// Pairwise similarity used to score a track state against a detection.
enum class Similarity { IoU, GIoU, DIoU, BIoU };

/// Similarity mapped to [0, 1]. GIoU and DIoU are shifted by (1 + s) / 2;
/// `buffer` only affects BIoU.
double affinity(Similarity kind, const BoundingBox& a, const BoundingBox& c, BufferScale buffer);

struct Association {
    std::vector<std::pair<std::size_t, std::size_t>> matches;  // (track index, detection index)
    std::vector<std::size_t> unmatched_tracks;
    std::vector<std::size_t> unmatched_detections;
};

/// One association round: cost 1 - affinity, pairs with affinity <= floor forbidden.
Association associate(std::span<const BoundingBox> tracks, std::span<const BoundingBox> detections,
                      Similarity kind, BufferScale buffer, double floor);

}  // namespace cbiou
