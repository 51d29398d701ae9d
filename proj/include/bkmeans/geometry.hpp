#ifndef BKMEANS_GEOMETRY_HPP
#define BKMEANS_GEOMETRY_HPP

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bkmeans/matrix.hpp"

namespace bkmeans {

namespace detail {

inline double squared_distance(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

inline void check_pair(const Matrix& data, const Matrix& codebook) {
    if (data.empty() || codebook.empty()) {
        throw std::invalid_argument("empty data set or codebook");
    }
    if (data.cols() != codebook.cols()) {
        throw std::invalid_argument("data and codebook dimensionality differ");
    }
}

/// Nearest centroid of a point; ties go to the lowest centroid index.
inline void nearest_one(const double* x, const Matrix& codebook,
                        std::size_t& best, double& best_d) {
    const std::size_t k = codebook.rows();
    const std::size_t d = codebook.cols();
    best = 0;
    best_d = squared_distance(x, codebook.row(0), d);
    for (std::size_t i = 1; i < k; ++i) {
        const double dist = squared_distance(x, codebook.row(i), d);
        if (dist < best_d) {
            best_d = dist;
            best = i;
        }
    }
}

/// Nearest and second-nearest centroid of a point (k >= 2). Ties in either
/// slot go to the lowest centroid index.
inline void nearest_two(const double* x, const Matrix& codebook,
                        std::size_t& best, double& best_d,
                        std::size_t& second, double& second_d) {
    const std::size_t k = codebook.rows();
    const std::size_t d = codebook.cols();
    best = 0;
    second = 0;
    best_d = std::numeric_limits<double>::infinity();
    second_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        const double dist = squared_distance(x, codebook.row(i), d);
        if (dist < best_d) {
            second_d = best_d;
            second = best;
            best_d = dist;
            best = i;
        } else if (dist < second_d) {
            second_d = dist;
            second = i;
        }
    }
}

}  // namespace detail

/// Per-point nearest/second-nearest centroid indices with squared distances.
/// For a single-centroid codebook the second-nearest fields are empty.
struct Assignment {
    std::vector<std::size_t> nearest;
    std::vector<double> d1;
    std::vector<std::size_t> second;
    std::vector<double> d2;

    bool has_second() const { return !second.empty(); }
};

/// Per-centroid aggregates over the Voronoi sets: `error[i]` is the summed
/// squared distance of the points owned by centroid i, `utility[i]` is the
/// summed d2 - d1 over the same points, i.e. the SSE increase caused by
/// deleting centroid i.
struct CentroidStats {
    std::vector<double> error;
    std::vector<double> utility;
    std::vector<std::size_t> voronoi_count;
};

/// Assigns every data point to its nearest and (when k >= 2) second-nearest
/// centroid under squared Euclidean distance. Ties are broken by the lowest
/// centroid index, so the result is deterministic for a fixed input.
inline Assignment assign(const Matrix& data, const Matrix& codebook) {
    detail::check_pair(data, codebook);
    const std::size_t n = data.rows();
    const std::size_t k = codebook.rows();
    Assignment out;
    out.nearest.resize(n);
    out.d1.resize(n);
    if (k >= 2) {
        out.second.resize(n);
        out.d2.resize(n);
        for (std::size_t p = 0; p < n; ++p) {
            detail::nearest_two(data.row(p), codebook, out.nearest[p], out.d1[p],
                                out.second[p], out.d2[p]);
        }
    } else {
        for (std::size_t p = 0; p < n; ++p) {
            detail::nearest_one(data.row(p), codebook, out.nearest[p], out.d1[p]);
        }
    }
    return out;
}

/// Summed squared error of quantizing `data` with `codebook`: the sum over
/// all points of the squared distance to the nearest centroid. Accumulated
/// in data-row order, so the value is bit-stable for a fixed input ordering.
inline double sse(const Matrix& data, const Matrix& codebook) {
    detail::check_pair(data, codebook);
    const std::size_t n = data.rows();
    double total = 0.0;
    std::size_t idx;
    double dist;
    for (std::size_t p = 0; p < n; ++p) {
        detail::nearest_one(data.row(p), codebook, idx, dist);
        total += dist;
    }
    return total;
}

/// Computes per-centroid error and utility in one pass (requires k >= 2,
/// since utility is undefined without a second-nearest centroid).
inline CentroidStats centroid_stats(const Matrix& data, const Matrix& codebook) {
    detail::check_pair(data, codebook);
    if (codebook.rows() < 2) {
        throw std::invalid_argument("centroid_stats: need at least 2 centroids");
    }
    const std::size_t n = data.rows();
    const std::size_t k = codebook.rows();
    CentroidStats stats;
    stats.error.assign(k, 0.0);
    stats.utility.assign(k, 0.0);
    stats.voronoi_count.assign(k, 0);
    std::size_t i1, i2;
    double d1, d2;
    for (std::size_t p = 0; p < n; ++p) {
        detail::nearest_two(data.row(p), codebook, i1, d1, i2, d2);
        stats.error[i1] += d1;
        stats.utility[i1] += d2 - d1;
        ++stats.voronoi_count[i1];
    }
    return stats;
}

/// Mean quantization distance: sqrt(SSE / n). Scale-aware magnitude used to
/// size insertion offsets.
inline double mean_quantization_distance(const Matrix& data, const Matrix& codebook) {
    return std::sqrt(sse(data, codebook) / static_cast<double>(data.rows()));
}

/// Mean Euclidean (not squared) distance from each centroid to its nearest
/// other centroid (requires k >= 2).
inline double mean_nn_distance(const Matrix& codebook) {
    const std::size_t k = codebook.rows();
    if (k < 2) {
        throw std::invalid_argument("mean_nn_distance: need at least 2 centroids");
    }
    const std::size_t d = codebook.cols();
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) {
                continue;
            }
            const double dist = detail::squared_distance(codebook.row(i), codebook.row(j), d);
            if (dist < best) {
                best = dist;
            }
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(k);
}

}  // namespace bkmeans

#endif
