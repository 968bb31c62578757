#include "cbiou/assignment.hpp"

#include <algorithm>
#include <cmath>

#include "cbiou/error.hpp"

namespace cbiou {

namespace {

// Shortest augmenting path Hungarian method on a square matrix, 1-indexed
// internally. Returns, for each row, its assigned column.
std::vector<std::size_t> hungarian_square(const std::vector<double>& a, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) {
        row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

}  // namespace

Assignment solve_assignment(const CostMatrix& cost) {
    const std::size_t rows = cost.rows();
    const std::size_t cols = cost.cols();
    Assignment result;

    double lo = 0.0;
    double hi = 0.0;
    bool any_allowed = false;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double x = cost(r, c);
            if (x == CostMatrix::kForbidden) continue;
            if (!std::isfinite(x)) {
                throw InvalidArgument("assignment costs must be finite or forbidden");
            }
            lo = any_allowed ? std::min(lo, x) : x;
            hi = any_allowed ? std::max(hi, x) : x;
            any_allowed = true;
        }
    }

    if (!any_allowed) {
        for (std::size_t r = 0; r < rows; ++r) result.unmatched_rows.push_back(r);
        for (std::size_t c = 0; c < cols; ++c) result.unmatched_cols.push_back(c);
        return result;
    }

    // Shift allowed costs to [0, range]. Leaving a row or column unmatched
    // costs `penalty`, which exceeds any achievable total of shifted costs,
    // so the optimum maximizes the pair count before minimizing cost.
    const std::size_t n = std::max(rows, cols);
    const double range = hi - lo;
    const double penalty = static_cast<double>(std::min(rows, cols)) * range + 1.0;
    std::vector<double> square(n * n, penalty);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double x = cost(r, c);
            if (x != CostMatrix::kForbidden) {
                square[r * n + c] = x - lo;
            }
        }
    }

    const auto row_to_col = hungarian_square(square, n);
    std::vector<char> col_used(cols, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t c = row_to_col[r];
        if (c < cols && cost(r, c) != CostMatrix::kForbidden) {
            result.matches.emplace_back(r, c);
            result.cost += cost(r, c);
            col_used[c] = 1;
        } else {
            result.unmatched_rows.push_back(r);
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        if (!col_used[c]) result.unmatched_cols.push_back(c);
    }
    return result;
}

double affinity(Similarity kind, const BoundingBox& a, const BoundingBox& c, BufferScale buffer) {
    switch (kind) {
        case Similarity::IoU:
            return iou(a, c);
        case Similarity::GIoU:
            return 0.5 * (1.0 + giou(a, c));
        case Similarity::DIoU:
            return 0.5 * (1.0 + diou(a, c));
        case Similarity::BIoU:
            return biou(a, c, buffer);
    }
    return 0.0;
}

Association associate(std::span<const BoundingBox> tracks, std::span<const BoundingBox> detections,
                      Similarity kind, BufferScale buffer, double floor) {
    CostMatrix cost(tracks.size(), detections.size(), CostMatrix::kForbidden);
    for (std::size_t t = 0; t < tracks.size(); ++t) {
        for (std::size_t d = 0; d < detections.size(); ++d) {
            const double s = affinity(kind, tracks[t], detections[d], buffer);
            if (s > floor) {
                cost(t, d) = 1.0 - s;
            }
        }
    }
    Assignment solved = solve_assignment(cost);
    return {std::move(solved.matches), std::move(solved.unmatched_rows),
            std::move(solved.unmatched_cols)};
}

}  // namespace cbiou
