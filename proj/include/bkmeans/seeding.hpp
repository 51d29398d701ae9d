#ifndef BKMEANS_SEEDING_HPP
#define BKMEANS_SEEDING_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bkmeans/lloyd.hpp"
#include "bkmeans/matrix.hpp"
#include "bkmeans/rng.hpp"

namespace bkmeans {

enum class SeedMethod {
    kmeanspp,  ///< D^2-weighted sampling
    random,    ///< uniform sample of data rows without replacement
    codebook,  ///< caller-supplied initial codebook
};

struct SeedConfig {
    SeedMethod method = SeedMethod::kmeanspp;
    /// Number of independent (seed -> Lloyd) restarts; the lowest-SSE result
    /// wins, ties going to the lowest restart index. Restart r draws from the
    /// stream mix_seed(rng_seed, r).
    int n_init = 10;
    std::uint64_t rng_seed = 0;
    /// Initial codebook, read only when method == SeedMethod::codebook.
    Matrix initial;
};

namespace detail {

/// Draws one index from the weight vector `w` (total = sum of w in index
/// order) by inverse CDF. Zero-weight entries are never drawn. The caller
/// guarantees total > 0.
inline std::size_t weighted_pick(const std::vector<double>& w, double total, Rng& rng) {
    const double r = rng.uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = w.size();
    for (std::size_t p = 0; p < w.size(); ++p) {
        if (w[p] > 0.0) {
            last_positive = p;
        }
        acc += w[p];
        if (acc > r) {
            return p;
        }
    }
    return last_positive;  // r rounded up to the total weight
}

}  // namespace detail

/// Uniform seeding: k distinct data rows sampled without replacement.
inline Matrix random_seed(const Matrix& data, std::size_t k, Rng& rng) {
    const std::size_t n = data.rows();
    if (k < 1 || k > n) {
        throw std::invalid_argument("random_seed: need 1 <= k <= n");
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Matrix out(0, data.cols());
    out.reserve_rows(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(idx[i], idx[j]);
        out.append_row(data.row(idx[i]), data.cols());
    }
    return out;
}

/// Extends an existing codebook to k centroids by D^2 sampling: each new
/// centroid is a data row drawn with probability proportional to its current
/// squared distance to the nearest chosen centroid. Rows at distance zero
/// (already covered) are never drawn while any positive weight remains; once
/// every weight is zero the draw falls back to a uniform choice among rows
/// not picked by this call, which can force duplicates when the data has
/// fewer than k distinct points.
inline Matrix kmeanspp_extend(const Matrix& data, const Matrix& chosen,
                              std::size_t k, Rng& rng) {
    detail::check_pair(data, chosen);
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    if (k < chosen.rows() || k > n) {
        throw std::invalid_argument("kmeanspp_extend: need chosen.rows() <= k <= n");
    }

    std::vector<double> dmin(n);
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t idx;
        detail::nearest_one(data.row(p), chosen, idx, dmin[p]);
    }
    std::vector<char> taken(n, 0);

    Matrix out = chosen;
    out.reserve_rows(k);
    while (out.rows() < k) {
        double total = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            total += dmin[p];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            pick = detail::weighted_pick(dmin, total, rng);
        } else {
            std::size_t free_rows = 0;
            for (std::size_t p = 0; p < n; ++p) {
                free_rows += !taken[p];
            }
            std::uint64_t target = rng.below(free_rows);
            for (std::size_t p = 0; p < n; ++p) {
                if (!taken[p] && target-- == 0) {
                    pick = p;
                    break;
                }
            }
        }
        taken[pick] = 1;
        out.append_row(data.row(pick), d);
        const double* c = data.row(pick);
        for (std::size_t p = 0; p < n; ++p) {
            const double dist = detail::squared_distance(data.row(p), c, d);
            if (dist < dmin[p]) {
                dmin[p] = dist;
            }
        }
    }
    return out;
}

/// k-means++ seeding: first centroid uniform over data rows, the rest via
/// D^2 sampling (plain, not the greedy multi-candidate variant).
inline Matrix kmeanspp_seed(const Matrix& data, std::size_t k, Rng& rng) {
    const std::size_t n = data.rows();
    if (k < 1 || k > n) {
        throw std::invalid_argument("kmeanspp_seed: need 1 <= k <= n");
    }
    Matrix first(0, data.cols());
    first.append_row(data.row(rng.below(n)), data.cols());
    if (k == 1) {
        return first;
    }
    return kmeanspp_extend(data, first, k, rng);
}

namespace detail {

/// Candidate-pooled D^2 seeding: every step after the first samples
/// 2 + floor(log k) candidate rows from the D^2 distribution and keeps the
/// one that lowers the total quantization potential most. This is the
/// default k-means++ behavior of the stock KMeans implementations that the
/// benchmark baseline stands in for; the public seeding API keeps the plain
/// single-draw variant and this one is not selectable as an init method.
inline Matrix kmeanspp_seed_pooled(const Matrix& data, std::size_t k, Rng& rng) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    if (k < 1 || k > n) {
        throw std::invalid_argument("kmeanspp_seed_pooled: need 1 <= k <= n");
    }
    const int pool = 2 + static_cast<int>(std::log(static_cast<double>(k)));

    Matrix out(0, d);
    out.reserve_rows(k);
    const std::size_t first = rng.below(n);
    out.append_row(data.row(first), d);
    if (k == 1) {
        return out;
    }

    std::vector<double> dmin(n);
    double pot = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        dmin[p] = squared_distance(data.row(p), data.row(first), d);
        pot += dmin[p];
    }
    std::vector<double> cand(n);
    std::vector<double> best(n);
    while (out.rows() < k) {
        std::size_t best_pick = n;
        double best_pot = std::numeric_limits<double>::infinity();
        for (int c = 0; c < pool; ++c) {
            const std::size_t pick =
                pot > 0.0 ? weighted_pick(dmin, pot, rng) : rng.below(n);
            double cand_pot = 0.0;
            const double* row = data.row(pick);
            for (std::size_t p = 0; p < n; ++p) {
                cand[p] = std::min(dmin[p], squared_distance(data.row(p), row, d));
                cand_pot += cand[p];
            }
            if (cand_pot < best_pot) {
                best_pot = cand_pot;
                best_pick = pick;
                best.swap(cand);
            }
        }
        out.append_row(data.row(best_pick), d);
        dmin.swap(best);
        pot = best_pot;
    }
    return out;
}

}  // namespace detail

struct SeedFitResult {
    LloydResult best;
    int best_run = 0;
    /// Lloyd iterations summed over every restart, not just the winner.
    long long lloyd_iterations = 0;
};

/// Runs (seed -> lloyd_fit) cfg.n_init times on independent RNG streams and
/// keeps the lowest-SSE result. With an explicit codebook every restart would
/// be identical, so a single run is performed.
inline SeedFitResult seed_and_fit(const Matrix& data, std::size_t k,
                                  const SeedConfig& seed_cfg,
                                  const LloydConfig& lloyd_cfg) {
    if (seed_cfg.n_init < 1) {
        throw std::invalid_argument("seed_and_fit: n_init must be >= 1");
    }
    int n_init = seed_cfg.n_init;
    if (seed_cfg.method == SeedMethod::codebook) {
        if (seed_cfg.initial.rows() != k || seed_cfg.initial.cols() != data.cols()) {
            throw std::invalid_argument("seed_and_fit: initial codebook has wrong shape");
        }
        n_init = 1;
    }

    SeedFitResult out;
    for (int run = 0; run < n_init; ++run) {
        Rng rng(mix_seed(seed_cfg.rng_seed, static_cast<std::uint64_t>(run)));
        Matrix c0;
        switch (seed_cfg.method) {
            case SeedMethod::kmeanspp:
                c0 = kmeanspp_seed(data, k, rng);
                break;
            case SeedMethod::random:
                c0 = random_seed(data, k, rng);
                break;
            case SeedMethod::codebook:
                c0 = seed_cfg.initial;
                break;
        }
        LloydResult result = lloyd_fit(data, c0, lloyd_cfg);
        out.lloyd_iterations += result.iterations;
        if (run == 0 || result.sse < out.best.sse) {
            out.best = std::move(result);
            out.best_run = run;
        }
    }
    return out;
}

}  // namespace bkmeans

#endif
