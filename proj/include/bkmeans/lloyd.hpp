#ifndef BKMEANS_LLOYD_HPP
#define BKMEANS_LLOYD_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bkmeans/geometry.hpp"
#include "bkmeans/matrix.hpp"

namespace bkmeans {

struct LloydConfig {
    /// Relative Frobenius norm of the centroid shift between two consecutive
    /// iterations below which the run is declared converged.
    double tol = 1e-4;
    int max_iter = 300;
};

struct LloydResult {
    Matrix codebook;
    double sse = 0.0;
    int iterations = 0;
    int empty_repairs = 0;
    bool converged = false;
};

/// Standard k-means (Lloyd's algorithm): alternates nearest-centroid
/// assignment and centroid-mean updates until the relative Frobenius norm of
/// the centroid displacement drops below `cfg.tol` or `cfg.max_iter` is
/// reached.
///
/// A centroid whose Voronoi set becomes empty is relocated to the data point
/// with the largest current squared distance to its nearest centroid (lowest
/// point index among maxima; successive empty centroids take successive
/// maxima). This keeps all k centroids active and never increases the SSE.
inline LloydResult lloyd_fit(const Matrix& data, const Matrix& initial,
                             const LloydConfig& cfg = {}) {
    detail::check_pair(data, initial);
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    const std::size_t k = initial.rows();
    if (k > n) {
        throw std::invalid_argument("lloyd_fit: more centroids than data points");
    }
    if (cfg.max_iter < 1 || cfg.tol < 0.0) {
        throw std::invalid_argument("lloyd_fit: invalid config");
    }

    Matrix centroids = initial;
    Matrix next(k, d);
    std::vector<std::size_t> owner(n);
    std::vector<double> d1(n);
    std::vector<std::size_t> counts(k);
    std::vector<std::size_t> empties;
    std::vector<std::size_t> order;

    LloydResult out;
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        // assignment step
        for (std::size_t p = 0; p < n; ++p) {
            detail::nearest_one(data.row(p), centroids, owner[p], d1[p]);
        }

        // update step, accumulated in data-row order
        std::fill(next.values().begin(), next.values().end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t p = 0; p < n; ++p) {
            double* dst = next.row(owner[p]);
            const double* src = data.row(p);
            for (std::size_t j = 0; j < d; ++j) {
                dst[j] += src[j];
            }
            ++counts[owner[p]];
        }
        empties.clear();
        for (std::size_t i = 0; i < k; ++i) {
            if (counts[i] == 0) {
                empties.push_back(i);
                continue;
            }
            double* dst = next.row(i);
            const double inv = 1.0 / static_cast<double>(counts[i]);
            for (std::size_t j = 0; j < d; ++j) {
                dst[j] *= inv;
            }
        }
        if (!empties.empty()) {
            order.resize(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (d1[a] != d1[b]) {
                    return d1[a] > d1[b];
                }
                return a < b;
            });
            for (std::size_t e = 0; e < empties.size(); ++e) {
                const double* src = data.row(order[e]);
                std::copy(src, src + d, next.row(empties[e]));
            }
            out.empty_repairs += static_cast<int>(empties.size());
        }

        const double shift = relative_shift(centroids, next);
        centroids.values().swap(next.values());
        out.iterations = iter;
        if (shift < cfg.tol) {
            out.converged = true;
            break;
        }
    }

    out.sse = sse(data, centroids);
    out.codebook = std::move(centroids);
    return out;
}

}  // namespace bkmeans

#endif
