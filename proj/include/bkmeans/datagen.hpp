#ifndef BKMEANS_DATAGEN_HPP
#define BKMEANS_DATAGEN_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkmeans/geometry.hpp"
#include "bkmeans/matrix.hpp"
#include "bkmeans/rng.hpp"

namespace bkmeans {

/// Splits n points over g clusters as evenly as possible (earlier clusters
/// take the remainder).
inline std::vector<std::size_t> even_counts(std::size_t n, std::size_t g) {
    if (g == 0) {
        throw std::invalid_argument("even_counts: g must be >= 1");
    }
    std::vector<std::size_t> counts(g, n / g);
    for (std::size_t i = 0; i < n % g; ++i) {
        ++counts[i];
    }
    return counts;
}

/// n i.i.d. points uniform on the unit square.
inline Matrix gen_uniform_square(std::size_t n, Rng& rng) {
    if (n < 1) {
        throw std::invalid_argument("gen_uniform_square: n must be >= 1");
    }
    Matrix out(n, 2);
    for (std::size_t p = 0; p < n; ++p) {
        out(p, 0) = rng.uniform();
        out(p, 1) = rng.uniform();
    }
    return out;
}

/// 2D Gaussian clusters centered on a regular rows x cols grid with the
/// given spacing and per-axis standard deviations. Point t belongs to
/// cluster t mod (rows*cols), so counts stay balanced for any n.
inline Matrix gen_gaussian_grid(std::size_t rows, std::size_t cols, std::size_t n,
                                double sigma_x, double sigma_y, double spacing,
                                Rng& rng) {
    const std::size_t g = rows * cols;
    if (g < 1 || n < g) {
        throw std::invalid_argument("gen_gaussian_grid: need rows*cols >= 1 and n >= rows*cols");
    }
    if (sigma_x < 0.0 || sigma_y < 0.0 || spacing <= 0.0) {
        throw std::invalid_argument("gen_gaussian_grid: invalid parameters");
    }
    Matrix out(n, 2);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t c = t % g;
        const double cx = static_cast<double>(c % cols) * spacing;
        const double cy = static_cast<double>(c / cols) * spacing;
        out(t, 0) = cx + sigma_x * rng.normal();
        out(t, 1) = cy + sigma_y * rng.normal();
    }
    return out;
}

struct ClusteredData {
    Matrix points;
    Matrix centers;
};

/// g isotropic unit-variance-style Gaussians around true centers drawn
/// uniformly from [0, side]^d. Center sets whose minimum pairwise distance
/// is not larger than 20 sigma are redrawn, so the clusters are guaranteed
/// to be well separated. The true centers are returned for ground-truth
/// checks.
inline ClusteredData gen_norm25_style(std::size_t n, std::size_t d, std::size_t g,
                                      double side, double sigma, Rng& rng) {
    if (n < 1 || d < 1 || g < 1 || n < g) {
        throw std::invalid_argument("gen_norm25_style: need n >= g >= 1 and d >= 1");
    }
    if (side <= 0.0 || sigma < 0.0) {
        throw std::invalid_argument("gen_norm25_style: invalid parameters");
    }

    Matrix centers(g, d);
    const int max_attempts = 100;
    for (int attempt = 0;; ++attempt) {
        for (std::size_t i = 0; i < g; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                centers(i, j) = side * rng.uniform();
            }
        }
        double min_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g; ++i) {
            for (std::size_t j = i + 1; j < g; ++j) {
                const double dd = detail::squared_distance(centers.row(i), centers.row(j), d);
                min_dist = std::min(min_dist, dd);
            }
        }
        if (g == 1 || std::sqrt(min_dist) > 20.0 * sigma) {
            break;
        }
        if (attempt + 1 >= max_attempts) {
            throw std::runtime_error("gen_norm25_style: could not separate centers; "
                                     "increase side or decrease g/sigma");
        }
    }

    Matrix points(n, d);
    for (std::size_t t = 0; t < n; ++t) {
        const double* c = centers.row(t % g);
        for (std::size_t j = 0; j < d; ++j) {
            points(t, j) = c[j] + sigma * rng.normal();
        }
    }
    return {std::move(points), std::move(centers)};
}

/// Axis-aligned Gaussian mixture with an explicit center list, per-cluster
/// point counts and per-cluster per-axis standard deviations. Points are
/// laid out cluster by cluster.
struct MixtureSpec {
    Matrix centers;                    ///< g x d
    std::vector<std::size_t> counts;   ///< size g, summing to n
    Matrix sigmas;                     ///< g x d, entries >= 0
};

inline Matrix gen_gaussian_mixture(const MixtureSpec& spec, Rng& rng) {
    const std::size_t g = spec.centers.rows();
    const std::size_t d = spec.centers.cols();
    if (g < 1 || spec.counts.size() != g ||
        spec.sigmas.rows() != g || spec.sigmas.cols() != d) {
        throw std::invalid_argument("gen_gaussian_mixture: inconsistent spec");
    }
    std::size_t n = 0;
    for (std::size_t c : spec.counts) {
        n += c;
    }
    if (n < 1) {
        throw std::invalid_argument("gen_gaussian_mixture: no points requested");
    }
    for (double s : spec.sigmas.values()) {
        if (!(s >= 0.0)) {
            throw std::invalid_argument("gen_gaussian_mixture: sigma must be >= 0");
        }
    }

    Matrix out(n, d);
    std::size_t t = 0;
    for (std::size_t c = 0; c < g; ++c) {
        const double* center = spec.centers.row(c);
        const double* sig = spec.sigmas.row(c);
        for (std::size_t i = 0; i < spec.counts[c]; ++i, ++t) {
            for (std::size_t j = 0; j < d; ++j) {
                out(t, j) = center[j] + sig[j] * rng.normal();
            }
        }
    }
    return out;
}

/// Convenience: even split of n over the centers, one circular sigma each.
inline MixtureSpec mixture_even(const Matrix& centers, std::size_t n, double sigma) {
    MixtureSpec spec;
    spec.centers = centers;
    spec.counts = even_counts(n, centers.rows());
    spec.sigmas = Matrix(centers.rows(), centers.cols(), sigma);
    return spec;
}

enum class GenFamily {
    uniform_square,
    gaussian_grid,
    norm25_style,
    gaussian_mixture,
};

/// Flat parameter record for the generator families; fields irrelevant to
/// the selected family are ignored.
struct GenSpec {
    GenFamily family = GenFamily::uniform_square;
    std::size_t n = 1000;
    std::uint64_t rng_seed = 0;
    // gaussian_grid
    std::size_t grid_rows = 5;
    std::size_t grid_cols = 5;
    double sigma_x = 0.08;
    double sigma_y = 0.16;
    double spacing = 1.0;
    // norm25_style
    std::size_t dim = 15;
    std::size_t clusters = 25;
    double side = 500.0;
    double sigma = 1.0;
    // gaussian_mixture
    MixtureSpec mixture;
};

inline Matrix generate(const GenSpec& spec) {
    Rng rng(spec.rng_seed);
    switch (spec.family) {
        case GenFamily::uniform_square:
            return gen_uniform_square(spec.n, rng);
        case GenFamily::gaussian_grid:
            return gen_gaussian_grid(spec.grid_rows, spec.grid_cols, spec.n,
                                     spec.sigma_x, spec.sigma_y, spec.spacing, rng);
        case GenFamily::norm25_style:
            return gen_norm25_style(spec.n, spec.dim, spec.clusters,
                                    spec.side, spec.sigma, rng).points;
        case GenFamily::gaussian_mixture:
            return gen_gaussian_mixture(spec.mixture, rng);
    }
    throw std::invalid_argument("generate: unknown family");
}

}  // namespace bkmeans

#endif
