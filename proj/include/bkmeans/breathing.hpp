#ifndef BKMEANS_BREATHING_HPP
#define BKMEANS_BREATHING_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bkmeans/geometry.hpp"
#include "bkmeans/lloyd.hpp"
#include "bkmeans/matrix.hpp"
#include "bkmeans/rng.hpp"
#include "bkmeans/seeding.hpp"

namespace bkmeans {

struct BreathingConfig {
    /// Initial breathing depth: number of centroids inserted and removed per
    /// cycle. Decremented after every non-improving cycle; the fit ends when
    /// it reaches zero. Zero disables breathing entirely, reducing the fit to
    /// its seeding stage.
    int m0 = 5;
    /// Freezing range: neighbors closer than theta times the mean
    /// nearest-centroid distance to a removed centroid are protected from
    /// removal within the same breathe-out step.
    double theta = 1.1;
    /// Relative SSE improvement required to count a cycle as an improvement.
    double tol = 1e-4;
    /// Insertion offset scale, relative to the mean quantization distance.
    double epsilon = 0.01;
    LloydConfig lloyd;
    /// Seeding stage configuration. Its rng_seed field is ignored; rng_seed
    /// below is the master seed for the whole fit.
    SeedConfig seed;
    std::uint64_t rng_seed = 0;
};

struct FitResult {
    Matrix codebook;
    double sse = 0.0;
    double seeding_sse = 0.0;
    int breathing_cycles = 0;
    long long lloyd_iterations = 0;
    double wall_seconds = 0.0;
    std::uint64_t rng_seed = 0;
};

/// Inserts m new centroids next to the m centroids with the largest
/// per-centroid error (ties to the lowest index). Each insertion copies its
/// source centroid and adds an independent offset eps * meanDist * u with u
/// drawn componentwise uniform from [-0.5, 0.5]. When the SSE is exactly
/// zero the mean quantization distance degenerates, and a machine-epsilon
/// scale jitter is used instead so the copies stay distinct.
inline Matrix breathe_in(const Matrix& data, const Matrix& codebook, int m,
                         double epsilon, Rng& rng) {
    const std::size_t k = codebook.rows();
    const std::size_t d = codebook.cols();
    if (m < 1 || static_cast<std::size_t>(m) > k) {
        throw std::invalid_argument("breathe_in: need 1 <= m <= k");
    }
    if (epsilon <= 0.0) {
        throw std::invalid_argument("breathe_in: epsilon must be > 0");
    }
    const CentroidStats stats = centroid_stats(data, codebook);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (stats.error[a] != stats.error[b]) {
            return stats.error[a] > stats.error[b];
        }
        return a < b;
    });

    double scale = epsilon * mean_quantization_distance(data, codebook);
    if (scale <= 0.0) {
        double mag = 1.0;
        for (double v : codebook.values()) {
            mag = std::max(mag, std::abs(v));
        }
        scale = std::sqrt(std::numeric_limits<double>::epsilon()) * mag;
    }

    Matrix out = codebook;
    out.reserve_rows(k + static_cast<std::size_t>(m));
    std::vector<double> row(d);
    for (int t = 0; t < m; ++t) {
        const double* src = codebook.row(order[static_cast<std::size_t>(t)]);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = src[j] + scale * (rng.uniform() - 0.5);
        }
        out.append_row(row.data(), d);
    }
    return out;
}

struct BreatheOutResult {
    Matrix codebook;
    /// Indices (into the input codebook) of the removed centroids.
    std::vector<std::size_t> removed;
    double kappa = 0.0;
    /// True when the |frozen| < k - m cap suppressed at least one freeze, in
    /// which case neighboring centroids may have been removed together.
    bool freeze_cap_hit = false;
};

/// Removes m centroids in ascending utility order while freezing the
/// neighborhood of every removal: once a centroid is selected, all other
/// centroids within strict Euclidean distance kappa = theta * meanNNDist are
/// excluded from removal in this step, nearest first, for as long as
/// |frozen| + m < k. Frozen centroids are skipped; the scan always finds m
/// removable centroids. Surviving rows keep their original order.
inline BreatheOutResult breathe_out_detailed(const Matrix& data, const Matrix& codebook,
                                             int m, double theta) {
    const std::size_t k = codebook.rows();
    const std::size_t d = codebook.cols();
    if (m < 1 || static_cast<std::size_t>(m) >= k) {
        throw std::invalid_argument("breathe_out: need 1 <= m < k");
    }
    if (theta <= 0.0) {
        throw std::invalid_argument("breathe_out: theta must be > 0");
    }
    const CentroidStats stats = centroid_stats(data, codebook);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (stats.utility[a] != stats.utility[b]) {
            return stats.utility[a] < stats.utility[b];
        }
        return a < b;
    });

    BreatheOutResult out;
    out.kappa = theta * mean_nn_distance(codebook);

    std::vector<double> dist(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double e = std::sqrt(detail::squared_distance(codebook.row(i), codebook.row(j), d));
            dist[i * k + j] = e;
            dist[j * k + i] = e;
        }
    }

    std::vector<char> frozen(k, 0);
    std::vector<char> removed_mask(k, 0);
    std::size_t frozen_count = 0;
    std::vector<std::size_t> neighbors;
    for (std::size_t idx : order) {
        if (frozen[idx]) {
            continue;
        }
        removed_mask[idx] = 1;
        out.removed.push_back(idx);

        neighbors.clear();
        for (std::size_t j = 0; j < k; ++j) {
            if (j != idx && dist[idx * k + j] < out.kappa) {
                neighbors.push_back(j);
            }
        }
        std::sort(neighbors.begin(), neighbors.end(), [&](std::size_t a, std::size_t b) {
            if (dist[idx * k + a] != dist[idx * k + b]) {
                return dist[idx * k + a] < dist[idx * k + b];
            }
            return a < b;
        });
        for (std::size_t j : neighbors) {
            if (frozen[j]) {
                continue;
            }
            if (frozen_count + static_cast<std::size_t>(m) < k) {
                frozen[j] = 1;
                ++frozen_count;
            } else {
                out.freeze_cap_hit = true;
                break;
            }
        }

        if (out.removed.size() == static_cast<std::size_t>(m)) {
            break;
        }
    }

    out.codebook = drop_rows(codebook, removed_mask);
    return out;
}

inline Matrix breathe_out(const Matrix& data, const Matrix& codebook, int m, double theta) {
    return breathe_out_detailed(data, codebook, m, theta).codebook;
}

namespace detail {
/// Stream tag for the breathing offsets, distinct from the seeding restart
/// indices 0..n_init-1 that share the same master seed.
inline constexpr std::uint64_t kBreatheStream = 0x62726561746865ULL;
}  // namespace detail

/// Breathing k-means. Seeds a codebook (k-means++ best-of-n_init by
/// default), then repeats breathe-in(m) -> k-means on k+m centroids ->
/// breathe-out(m) -> k-means on k centroids, keeping the best codebook seen.
/// A cycle that fails to beat the best SSE by the relative margin cfg.tol
/// decrements m; the fit returns once m reaches zero. The working codebook
/// always continues from the last cycle, improving or not; only the returned
/// codebook is the best one.
///
/// k = 1 returns the seeding result directly (a single centroid cannot
/// breathe), as does m0 = 0. The effective initial depth is capped at k
/// (insertions copy distinct source centroids) and at n - k (the enlarged
/// codebook must not exceed the number of data points).
inline FitResult bkm_fit(const Matrix& data, std::size_t k, const BreathingConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = data.rows();
    if (k < 1 || k > n) {
        throw std::invalid_argument("bkm_fit: need 1 <= k <= n");
    }
    if (cfg.m0 < 0 || cfg.theta <= 0.0 || cfg.tol < 0.0 || cfg.epsilon <= 0.0) {
        throw std::invalid_argument("bkm_fit: invalid config");
    }

    SeedConfig seed_cfg = cfg.seed;
    seed_cfg.rng_seed = cfg.rng_seed;
    SeedFitResult seeded = seed_and_fit(data, k, seed_cfg, cfg.lloyd);

    FitResult out;
    out.rng_seed = cfg.rng_seed;
    out.seeding_sse = seeded.best.sse;
    out.lloyd_iterations = seeded.lloyd_iterations;
    out.sse = seeded.best.sse;
    out.codebook = std::move(seeded.best.codebook);

    int m = std::min<long long>({cfg.m0, static_cast<long long>(k),
                                 static_cast<long long>(n - k)});
    if (k == 1 || m <= 0) {
        out.wall_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start).count();
        return out;
    }

    Rng rng(mix_seed(cfg.rng_seed, detail::kBreatheStream));
    Matrix current = out.codebook;
    double best_sse = out.sse;
    while (m > 0) {
        Matrix grown = breathe_in(data, current, m, cfg.epsilon, rng);
        LloydResult enlarged = lloyd_fit(data, grown, cfg.lloyd);
        Matrix shrunk = breathe_out(data, enlarged.codebook, m, cfg.theta);
        LloydResult restored = lloyd_fit(data, shrunk, cfg.lloyd);

        current = std::move(restored.codebook);
        out.lloyd_iterations += enlarged.iterations + restored.iterations;
        ++out.breathing_cycles;

        if (restored.sse < best_sse * (1.0 - cfg.tol)) {
            best_sse = restored.sse;
            out.codebook = current;
        } else {
            --m;
        }
    }
    out.sse = best_sse;
    out.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace bkmeans

#endif
