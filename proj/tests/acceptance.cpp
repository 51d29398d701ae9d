// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the number of
// failures, so the suite doubles as a ctest gate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "bkmeans/bkmeans.hpp"
#include "test_support.hpp"

using namespace bkmeans;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// campaign results shared by the pairing / cost-envelope criteria
std::vector<BenchResult> g_campaigns;
std::vector<BenchSpec> g_campaign_specs;

BenchResult run_campaign(const ProblemSpec& problem, std::uint64_t master, int workers) {
    BenchSpec spec;
    spec.master_seed = master;
    spec.problems.push_back(problem);
    BenchResult result = run_bench(spec, workers);
    g_campaigns.push_back(result);
    g_campaign_specs.push_back(spec);
    return result;
}

int max_cycles(const BenchResult& result) {
    int cycles = 0;
    for (const RunRecord& rec : result.records) {
        cycles = std::max(cycles, rec.cycles);
    }
    return cycles;
}

// 1. utility from centroid_stats equals the leave-one-out SSE difference
Outcome criterion_utility_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2024);
    double worst = 0.0;
    for (int instance = 0; instance < 200; ++instance) {
        const std::size_t k = 2 + rng.below(7);
        const std::size_t d = 1 + rng.below(4);
        const std::size_t n = k + rng.below(51 - k);
        const Matrix X = testsup::random_matrix(rng, n, d);
        const Matrix C = testsup::rows_subset(X, k, rng);
        const CentroidStats stats = centroid_stats(X, C);
        const double base = sse(X, C);
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<char> drop(k, 0);
            drop[i] = 1;
            const double oracle = sse(X, drop_rows(C, drop)) - base;
            const double scale = std::max(std::abs(oracle), std::abs(stats.utility[i]));
            const double rel = scale > 0.0 ? std::abs(oracle - stats.utility[i]) / scale : 0.0;
            worst = std::max(worst, rel);
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= 1e-9 && elapsed < 10.0;
    return {pass, fmt("200 instances, worst rel dev %.2e, %.2f s", worst, elapsed)};
}

// 2. exact duplicates force both utilities to zero
Outcome criterion_duplicate_utility() {
    Rng rng(2025);
    for (int instance = 0; instance < 50; ++instance) {
        const std::size_t k = 2 + rng.below(6);
        const std::size_t d = 1 + rng.below(4);
        const std::size_t n = k + 5 + rng.below(40);
        const Matrix X = testsup::random_matrix(rng, n, d);
        Matrix C = testsup::rows_subset(X, k, rng);
        const std::size_t dup = rng.below(k);
        C.append_row(C.row(dup), d);
        const CentroidStats stats = centroid_stats(X, C);
        if (stats.utility[dup] != 0.0 || stats.utility[k] != 0.0) {
            return {false, fmt("instance %d: duplicate utilities %.3e / %.3e", instance,
                               stats.utility[dup], stats.utility[k])};
        }
    }
    return {true, "50 instances, every duplicate pair at exactly 0"};
}

// 3. SSE(bkm) <= SSE(km++) for every paired run, dSSE >= 0 in every report row
Outcome criterion_monotone_pairing() {
    std::size_t runs = 0;
    for (const BenchResult& campaign : g_campaigns) {
        for (const RunRecord& rec : campaign.records) {
            ++runs;
            if (rec.paired.sse_bkm > rec.paired.sse_kmpp) {
                return {false, fmt("run %d violates SSE(bkm) <= SSE(km++)", rec.run)};
            }
        }
        for (const ExperimentReport& report : campaign.reports) {
            if (report.mean_delta_sse < 0.0) {
                return {false, "negative mean dSSE in report row"};
            }
        }
    }
    if (runs == 0) {
        return {false, "no campaign records available"};
    }
    return {true, fmt("%zu paired runs, no deterioration", runs)};
}

// 4. uniform square, n=1000, k=100, R=20, defaults
Outcome criterion_uniform() {
    const auto t0 = std::chrono::steady_clock::now();
    ProblemSpec p;
    p.name = "uniform";
    p.gen.family = GenFamily::uniform_square;
    p.gen.n = 1000;
    p.k = 100;
    p.runs = 20;
    const BenchResult result = run_campaign(p, 1, 2);
    const double elapsed = seconds_since(t0);
    const double dsse = result.reports[0].mean_delta_sse;
    const int cycles = max_cycles(result);
    const bool pass = dsse >= 0.025 && dsse <= 0.070 && elapsed < 300.0 && cycles < 250;
    return {pass, fmt("mean dSSE %.2f%% (band [2.5%%, 7%%]), max cycles %d, %.1f s",
                      100.0 * dsse, cycles, elapsed)};
}

// 5. 5x5 Gaussian grid, n=10000, k=50, R=10
Outcome criterion_gaussian_grid() {
    ProblemSpec p;
    p.name = "gmd5x5";
    p.gen.family = GenFamily::gaussian_grid;
    p.gen.n = 10000;
    p.gen.grid_rows = 5;
    p.gen.grid_cols = 5;
    p.gen.sigma_x = 0.08;
    p.gen.sigma_y = 0.16;
    p.gen.spacing = 1.0;
    p.k = 50;
    p.runs = 10;
    const BenchResult result = run_campaign(p, 1, 2);
    const ExperimentReport& r = result.reports[0];
    const bool band = r.mean_delta_sse >= 0.03 && r.mean_delta_sse <= 0.12;
    const bool spread = r.rel_std_bkm < r.rel_std_kmpp;
    const bool pass = band && spread && max_cycles(result) < 250;
    return {pass, fmt("mean dSSE %.2f%% (band [3%%, 12%%]), rel std bkm %.3f%% < km++ %.3f%%",
                      100.0 * r.mean_delta_sse, 100.0 * r.rel_std_bkm, 100.0 * r.rel_std_kmpp)};
}

// 6. Norm25-style easy case: k matches the clusters, both algorithms tie
Outcome criterion_norm25() {
    ProblemSpec p;
    p.name = "norm25";
    p.gen.family = GenFamily::norm25_style;
    p.gen.n = 10000;
    p.gen.dim = 15;
    p.gen.clusters = 25;
    p.gen.side = 500.0;
    p.gen.sigma = 1.0;
    p.explicit_data_seed = true;
    p.data_seed = 606;
    p.k = 25;
    p.runs = 5;
    const BenchResult result = run_campaign(p, 1, 2);
    const double dsse = result.reports[0].mean_delta_sse;

    // same stream as the campaign's generator, so the centers match the data
    Rng rng(606);
    const ClusteredData data = gen_norm25_style(10000, 15, 25, 500.0, 1.0, rng);
    const double sse_true = sse(data.points, data.centers);
    const double target = 10000.0 * 15.0;  // n * d * sigma^2
    const bool pass = dsse <= 0.001 && std::abs(sse_true - target) <= 0.02 * target &&
                      max_cycles(result) < 250;
    return {pass, fmt("mean dSSE %.4f%% (<= 0.1%%), true-center SSE %.4g vs %.4g (2%% band)",
                      100.0 * dsse, sse_true, target)};
}

// 7. well-separated mixture: seeding alone finds one centroid per cluster
Outcome criterion_seeding_sanity() {
    Matrix centers(0, 2);
    for (int i = 0; i < 15 && centers.rows() < 14; ++i) {
        const double row[2] = {static_cast<double>(i % 5), static_cast<double>(i / 5)};
        centers.append_row(row, 2);
    }
    Rng data_rng(321);
    const Matrix X = gen_gaussian_mixture(mixture_even(centers, 4000, 0.05), data_rng);

    int good = 0;
    for (int run = 0; run < 100; ++run) {
        SeedConfig cfg;
        cfg.n_init = 10;
        cfg.rng_seed = mix_seed(555, run);
        const SeedFitResult fit = seed_and_fit(X, 14, cfg, {});
        std::vector<char> taken(14, 0);
        bool unique = true;
        for (std::size_t c = 0; c < 14; ++c) {
            std::size_t nearest;
            double dist;
            detail::nearest_one(centers.row(c), fit.best.codebook, nearest, dist);
            if (taken[nearest]) {
                unique = false;
                break;
            }
            taken[nearest] = 1;
        }
        good += unique;
    }
    return {good >= 95, fmt("%d / 100 runs with one centroid per cluster (need >= 95)", good)};
}

// 8. D^2 selection frequencies on X={0,1,3} with the first center at 0
Outcome criterion_dsq_sampling() {
    const auto X = Matrix::from_rows({{0.0}, {1.0}, {3.0}});
    const auto first = Matrix::from_rows({{0.0}});
    Rng rng(808);
    const int trials = 10000;
    int picked_one = 0;
    for (int t = 0; t < trials; ++t) {
        const Matrix C = kmeanspp_extend(X, first, 2, rng);
        picked_one += C(1, 0) == 1.0;
    }
    const double e1 = trials * 0.1;
    const double e3 = trials * 0.9;
    const double d1 = picked_one - e1;
    const double d3 = (trials - picked_one) - e3;
    const double chi2 = d1 * d1 / e1 + d3 * d3 / e3;
    // df=1, alpha=0.01
    return {chi2 < 6.635, fmt("picked 1 in %d / %d draws, chi2 %.3f < 6.635", picked_one,
                              trials, chi2)};
}

// 9. m0=0 reduces to the seeding; k=1 returns the seeding unchanged
Outcome criterion_reductions() {
    Rng data_rng(99);
    const Matrix X = gen_uniform_square(400, data_rng);

    BreathingConfig cfg;
    cfg.m0 = 0;
    cfg.rng_seed = 99;
    const FitResult reduced = bkm_fit(X, 25, cfg);
    SeedConfig seed_cfg = cfg.seed;
    seed_cfg.rng_seed = 99;
    const SeedFitResult seeded = seed_and_fit(X, 25, seed_cfg, cfg.lloyd);
    if (reduced.sse != seeded.best.sse || !(reduced.codebook == seeded.best.codebook)) {
        return {false, "m0=0 fit differs from the seeding result"};
    }

    BreathingConfig k1;
    k1.rng_seed = 7;
    const FitResult single = bkm_fit(X, 1, k1);
    SeedConfig k1_seed = k1.seed;
    k1_seed.rng_seed = 7;
    const SeedFitResult single_seeded = seed_and_fit(X, 1, k1_seed, k1.lloyd);
    if (single.sse != single_seeded.best.sse ||
        !(single.codebook == single_seeded.best.codebook) || single.breathing_cycles != 0) {
        return {false, "k=1 fit differs from the seeding result"};
    }
    return {true, "m0=0 and k=1 both bit-identical to their seeding"};
}

// 10. identical master seed => byte-identical CSV, independent of workers
Outcome criterion_determinism() {
    BenchSpec spec;
    spec.master_seed = 31;
    {
        ProblemSpec p;
        p.name = "uniform-mini";
        p.gen.family = GenFamily::uniform_square;
        p.gen.n = 200;
        p.k = 10;
        p.runs = 3;
        p.n_init = 4;
        spec.problems.push_back(p);
    }
    {
        ProblemSpec p;
        p.name = "grid-mini";
        p.gen.family = GenFamily::gaussian_grid;
        p.gen.n = 240;
        p.gen.grid_rows = 2;
        p.gen.grid_cols = 2;
        p.gen.sigma_x = 0.05;
        p.gen.sigma_y = 0.05;
        p.gen.spacing = 1.0;
        p.k = 4;
        p.runs = 2;
        p.n_init = 3;
        spec.problems.push_back(p);
    }
    const BenchResult first = run_bench(spec, 1);
    const BenchResult second = run_bench(spec, 1);
    const BenchResult parallel = run_bench(spec, 4);
    g_campaigns.push_back(first);
    g_campaign_specs.push_back(spec);
    const std::string a = runs_csv(first, spec);
    const std::string b = runs_csv(second, spec);
    const std::string c = runs_csv(parallel, spec);
    const bool pass = a == b && a == c;
    return {pass, pass ? "two serial runs and a 4-worker run agree byte for byte"
                       : "CSV outputs differ"};
}

// 11. freezing: one removal per tight pair; removals separated by kappa
Outcome criterion_freezing() {
    const auto X = Matrix::from_rows({{0.0}, {0.1}, {10.0}, {10.1}});
    const BreatheOutResult hand = breathe_out_detailed(X, X, 2, 1.1);
    std::vector<std::size_t> removed = hand.removed;
    std::sort(removed.begin(), removed.end());
    if (!(hand.codebook == Matrix::from_rows({{0.1}, {10.1}})) ||
        removed != std::vector<std::size_t>{0, 2}) {
        return {false, "hand-simulated pair case removed the wrong centroids"};
    }

    Rng rng(2026);
    int cap_hits = 0;
    for (int instance = 0; instance < 200; ++instance) {
        const std::size_t d = 1 + rng.below(3);
        const std::size_t k = 4 + rng.below(9);
        const std::size_t n = k + 10 + rng.below(60);
        const int m = 1 + static_cast<int>(rng.below(3));
        const Matrix data = testsup::random_matrix(rng, n, d);
        const Matrix codebook = testsup::rows_subset(data, k, rng);
        const BreatheOutResult r = breathe_out_detailed(data, codebook, m, 1.1);
        cap_hits += r.freeze_cap_hit;
        for (std::size_t a = 0; a < r.removed.size(); ++a) {
            for (std::size_t b = a + 1; b < r.removed.size(); ++b) {
                const double dist = std::sqrt(detail::squared_distance(
                    codebook.row(r.removed[a]), codebook.row(r.removed[b]), d));
                if (dist < r.kappa && !r.freeze_cap_hit) {
                    return {false,
                            fmt("instance %d: removals %.3g apart, kappa %.3g, cap not hit",
                                instance, dist, r.kappa)};
                }
            }
        }
    }
    return {true, fmt("pair case exact; 200 random instances clean (%d with cap hit)",
                      cap_hits)};
}

// 12. breathing never costs more than 10x its paired baseline on the
// experiment problems of criteria 4-6
Outcome criterion_cost_envelope() {
    double worst = -1.0;
    std::string worst_name;
    for (const BenchResult& campaign : g_campaigns) {
        for (const ExperimentReport& report : campaign.reports) {
            const bool experiment = report.problem == "uniform" ||
                                    report.problem == "gmd5x5" ||
                                    report.problem == "norm25";
            if (experiment && report.mean_delta_cpu > worst) {
                worst = report.mean_delta_cpu;
                worst_name = report.problem;
            }
        }
    }
    if (worst < 0.0) {
        return {false, "no campaign records available"};
    }
    // dCPU <= 9 means bkm wall time <= 10x the paired km++ wall time
    return {worst <= 9.0, fmt("worst mean dCPU %.1f%% on '%s' (cap 900%%)", 100.0 * worst,
                              worst_name.c_str())};
}

}  // namespace

int main() {
    std::map<int, std::pair<const char*, Outcome>> outcomes;
    outcomes[1] = {"utility oracle equivalence", criterion_utility_oracle()};
    outcomes[2] = {"duplicate-utility limit", criterion_duplicate_utility()};
    outcomes[4] = {"uniform-square improvement", criterion_uniform()};
    outcomes[5] = {"gaussian-grid improvement", criterion_gaussian_grid()};
    outcomes[6] = {"norm25 easy case", criterion_norm25()};
    outcomes[7] = {"seeding sanity on separated clusters", criterion_seeding_sanity()};
    outcomes[8] = {"D^2 sampling correctness", criterion_dsq_sampling()};
    outcomes[9] = {"reduction identities", criterion_reductions()};
    outcomes[10] = {"benchmark determinism", criterion_determinism()};
    outcomes[11] = {"freezing behavior", criterion_freezing()};
    // 3 and 12 read the campaign records gathered above
    outcomes[3] = {"monotone pairing", criterion_monotone_pairing()};
    outcomes[12] = {"cost envelope", criterion_cost_envelope()};

    int failures = 0;
    for (const auto& [id, entry] : outcomes) {
        const auto& [label, outcome] = entry;
        failures += !outcome.pass;
        std::printf("%s %2d  %-38s %s\n", outcome.pass ? "PASS" : "FAIL", id, label,
                    outcome.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(outcomes.size()) - failures,
                outcomes.size());
    return failures;
}
