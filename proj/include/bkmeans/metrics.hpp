#ifndef BKMEANS_METRICS_HPP
#define BKMEANS_METRICS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bkmeans {

/// One paired experiment: a k-means++ fit followed by a breathing fit that
/// was initialized from the k-means++ result. By construction
/// sse_bkm <= sse_kmpp, and cpu_bkm includes the paired k-means++ time.
struct PairedRun {
    double sse_kmpp = 0.0;
    double sse_bkm = 0.0;
    double cpu_kmpp = 0.0;  ///< seconds
    double cpu_bkm = 0.0;   ///< seconds
    std::uint64_t rng_seed = 0;
};

struct DeltaValue {
    double value = 0.0;
    /// Set when the reference quantity was zero and the ratio is undefined.
    bool degenerate = false;
};

/// Relative SSE improvement of the breathing fit over its k-means++ seed:
/// 1 - sse_bkm / sse_kmpp.
inline DeltaValue delta_sse(double sse_kmpp, double sse_bkm) {
    if (sse_kmpp < 0.0 || sse_bkm < 0.0) {
        throw std::invalid_argument("delta_sse: SSE must be non-negative");
    }
    if (sse_kmpp == 0.0) {
        return {0.0, true};
    }
    return {1.0 - sse_bkm / sse_kmpp, false};
}

/// Relative extra computational cost: cpu_bkm / cpu_kmpp - 1.
inline DeltaValue delta_cpu(double cpu_kmpp, double cpu_bkm) {
    if (cpu_kmpp < 0.0 || cpu_bkm < 0.0) {
        throw std::invalid_argument("delta_cpu: durations must be non-negative");
    }
    if (cpu_kmpp == 0.0) {
        return {0.0, true};
    }
    return {cpu_bkm / cpu_kmpp - 1.0, false};
}

/// Relative SSE deviation from a known reference solution:
/// sse / sse_good - 1. Negative when the solution beats the reference.
inline double delta_good(double sse, double sse_good) {
    if (sse_good <= 0.0) {
        throw std::invalid_argument("delta_good: reference SSE must be > 0");
    }
    return sse / sse_good - 1.0;
}

/// Aggregated statistics of a paired campaign. The identification fields
/// (problem, n, d, k) are filled by the caller; aggregate() computes the
/// rest. Relative standard deviations are population std / mean.
struct ExperimentReport {
    std::string problem;
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    std::size_t runs = 0;
    double mean_sse_kmpp = 0.0;
    double rel_std_kmpp = 0.0;
    double mean_sse_bkm = 0.0;
    double rel_std_bkm = 0.0;
    double mean_delta_sse = 0.0;
    double mean_delta_cpu = 0.0;
};

namespace detail {
inline double rel_std(const std::vector<double>& xs, double mean) {
    if (mean == 0.0) {
        return 0.0;
    }
    double acc = 0.0;
    for (double x : xs) {
        const double dev = x - mean;
        acc += dev * dev;
    }
    return std::sqrt(acc / static_cast<double>(xs.size())) / mean;
}
}  // namespace detail

inline ExperimentReport aggregate(const std::vector<PairedRun>& runs) {
    if (runs.empty()) {
        throw std::invalid_argument("aggregate: no runs");
    }
    const double count = static_cast<double>(runs.size());
    std::vector<double> kmpp, bkm;
    kmpp.reserve(runs.size());
    bkm.reserve(runs.size());
    ExperimentReport report;
    report.runs = runs.size();
    double sum_dsse = 0.0;
    double sum_dcpu = 0.0;
    for (const PairedRun& run : runs) {
        kmpp.push_back(run.sse_kmpp);
        bkm.push_back(run.sse_bkm);
        report.mean_sse_kmpp += run.sse_kmpp;
        report.mean_sse_bkm += run.sse_bkm;
        sum_dsse += delta_sse(run.sse_kmpp, run.sse_bkm).value;
        sum_dcpu += delta_cpu(run.cpu_kmpp, run.cpu_bkm).value;
    }
    report.mean_sse_kmpp /= count;
    report.mean_sse_bkm /= count;
    report.rel_std_kmpp = detail::rel_std(kmpp, report.mean_sse_kmpp);
    report.rel_std_bkm = detail::rel_std(bkm, report.mean_sse_bkm);
    report.mean_delta_sse = sum_dsse / count;
    report.mean_delta_cpu = sum_dcpu / count;
    return report;
}

}  // namespace bkmeans

#endif
