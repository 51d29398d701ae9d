#ifndef BKMEANS_BENCH_HPP
#define BKMEANS_BENCH_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bkmeans/breathing.hpp"
#include "bkmeans/datagen.hpp"
#include "bkmeans/io.hpp"
#include "bkmeans/metrics.hpp"

namespace bkmeans {

/// One benchmark problem: a data source plus the paired-protocol parameters.
/// Every run first fits k-means++ (best of n_init restarts), then a breathing
/// fit initialized from that result, so the improvement is never negative.
struct ProblemSpec {
    std::string name;
    bool from_file = false;
    std::string file_path;
    GenSpec gen;
    bool explicit_data_seed = false;
    std::uint64_t data_seed = 0;
    std::size_t k = 8;
    int runs = 1;
    int n_init = 10;
    int m0 = 5;
    double theta = 1.1;
    double tol = 1e-4;
    double epsilon = 0.01;
    int max_iter = 300;
};

struct BenchSpec {
    std::uint64_t master_seed = 0;
    std::vector<ProblemSpec> problems;
};

struct RunRecord {
    std::size_t problem = 0;
    int run = 0;
    std::uint64_t seed = 0;
    PairedRun paired;
    int cycles = 0;
    long long lloyd_iterations = 0;
};

struct BenchResult {
    std::vector<ExperimentReport> reports;  ///< one per problem, spec order
    std::vector<RunRecord> records;         ///< ordered by (problem, run)
};

namespace detail {

inline std::uint64_t parse_u64_field(const std::string& text, const std::string& source,
                                     std::size_t line) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw ParseError(source, line, "not an unsigned integer: '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
}

inline long long parse_ll_field(const std::string& text, const std::string& source,
                                std::size_t line) {
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw ParseError(source, line, "not an integer: '" + text + "'");
    }
    return v;
}

inline std::vector<std::string> split_ws(std::string_view body) {
    std::vector<std::string> out;
    std::istringstream stream{std::string(body)};
    std::string token;
    while (stream >> token) {
        out.push_back(token);
    }
    return out;
}

/// Parses the `data = <family> key=value ...` clause of a problem section.
inline void parse_data_clause(ProblemSpec& prob, const std::string& value,
                              const std::string& source, std::size_t line) {
    const std::vector<std::string> tokens = split_ws(value);
    if (tokens.empty()) {
        throw ParseError(source, line, "empty data clause");
    }
    const std::string& family = tokens.front();
    if (family == "file") {
        if (tokens.size() != 2) {
            throw ParseError(source, line, "expected: data = file PATH");
        }
        prob.from_file = true;
        prob.file_path = tokens[1];
        return;
    }

    GenSpec& gen = prob.gen;
    if (family == "uniform") {
        gen.family = GenFamily::uniform_square;
    } else if (family == "gaussian-grid") {
        gen.family = GenFamily::gaussian_grid;
    } else if (family == "norm25") {
        gen.family = GenFamily::norm25_style;
    } else if (family == "mixture") {
        gen.family = GenFamily::gaussian_mixture;
    } else {
        throw ParseError(source, line, "unknown data family: '" + family + "'");
    }
    std::string mixture_centers;
    double mixture_sigma = 1.0;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos) {
            throw ParseError(source, line, "expected key=value, got '" + tok + "'");
        }
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "n") {
            gen.n = parse_u64_field(val, source, line);
        } else if (key == "rows") {
            gen.grid_rows = parse_u64_field(val, source, line);
        } else if (key == "cols") {
            gen.grid_cols = parse_u64_field(val, source, line);
        } else if (key == "sigma-x") {
            gen.sigma_x = parse_number(val, source, line);
        } else if (key == "sigma-y") {
            gen.sigma_y = parse_number(val, source, line);
        } else if (key == "spacing") {
            gen.spacing = parse_number(val, source, line);
        } else if (key == "d") {
            gen.dim = parse_u64_field(val, source, line);
        } else if (key == "g") {
            gen.clusters = parse_u64_field(val, source, line);
        } else if (key == "side") {
            gen.side = parse_number(val, source, line);
        } else if (key == "sigma") {
            gen.sigma = parse_number(val, source, line);
            mixture_sigma = gen.sigma;
        } else if (key == "centers") {
            mixture_centers = val;
        } else {
            throw ParseError(source, line, "unknown data parameter: '" + key + "'");
        }
    }
    if (gen.family == GenFamily::gaussian_mixture) {
        if (mixture_centers.empty()) {
            throw ParseError(source, line, "mixture needs centers=PATH");
        }
        gen.mixture = mixture_even(load_matrix(mixture_centers), gen.n, mixture_sigma);
    }
}

}  // namespace detail

/// Parses the benchmark spec format: optional top-level `master_seed = N`,
/// then one `[name]` section per problem with `key = value` lines. Lines
/// starting with '#' and blank lines are ignored.
inline BenchSpec parse_bench_spec(std::istream& in, const std::string& source = "<spec>") {
    BenchSpec spec;
    ProblemSpec* current = nullptr;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = detail::trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']' || body.size() < 3) {
                throw ParseError(source, line_no, "malformed section header");
            }
            const std::string name{detail::trim(body.substr(1, body.size() - 2))};
            if (name.find_first_of(", \t") != std::string::npos) {
                throw ParseError(source, line_no, "problem names must not contain commas or spaces");
            }
            for (const ProblemSpec& p : spec.problems) {
                if (p.name == name) {
                    throw ParseError(source, line_no, "duplicate problem name: '" + name + "'");
                }
            }
            spec.problems.emplace_back();
            current = &spec.problems.back();
            current->name = name;
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(source, line_no, "expected key = value");
        }
        const std::string key{detail::trim(body.substr(0, eq))};
        const std::string value{detail::trim(body.substr(eq + 1))};
        if (!current) {
            if (key == "master_seed") {
                spec.master_seed = detail::parse_u64_field(value, source, line_no);
            } else {
                throw ParseError(source, line_no, "unknown top-level key: '" + key + "'");
            }
            continue;
        }
        if (key == "data") {
            detail::parse_data_clause(*current, value, source, line_no);
        } else if (key == "data_seed") {
            current->data_seed = detail::parse_u64_field(value, source, line_no);
            current->explicit_data_seed = true;
        } else if (key == "k") {
            current->k = detail::parse_u64_field(value, source, line_no);
        } else if (key == "runs") {
            current->runs = static_cast<int>(detail::parse_ll_field(value, source, line_no));
        } else if (key == "n_init") {
            current->n_init = static_cast<int>(detail::parse_ll_field(value, source, line_no));
        } else if (key == "m") {
            current->m0 = static_cast<int>(detail::parse_ll_field(value, source, line_no));
        } else if (key == "theta") {
            current->theta = detail::parse_number(value, source, line_no);
        } else if (key == "tol") {
            current->tol = detail::parse_number(value, source, line_no);
        } else if (key == "epsilon") {
            current->epsilon = detail::parse_number(value, source, line_no);
        } else if (key == "max_iter") {
            current->max_iter = static_cast<int>(detail::parse_ll_field(value, source, line_no));
        } else {
            throw ParseError(source, line_no, "unknown key: '" + key + "'");
        }
    }
    if (spec.problems.empty()) {
        throw ParseError(source, line_no, "spec defines no problems");
    }
    return spec;
}

inline BenchSpec load_bench_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for reading");
    }
    return parse_bench_spec(in, path);
}

namespace detail {

/// The baseline of a paired run: best-of-n_init k-means++ fits using the
/// candidate-pooled seeding, matching the stock KMeans implementations this
/// benchmark column stands in for. Restart r draws from mix_seed(seed, r),
/// the same splitting scheme seed_and_fit uses.
inline LloydResult baseline_fit(const Matrix& data, std::size_t k, int n_init,
                                const LloydConfig& lloyd, std::uint64_t seed,
                                long long& lloyd_iterations) {
    LloydResult best;
    for (int run = 0; run < n_init; ++run) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(run)));
        Matrix c0 = kmeanspp_seed_pooled(data, k, rng);
        LloydResult result = lloyd_fit(data, c0, lloyd);
        lloyd_iterations += result.iterations;
        if (run == 0 || result.sse < best.sse) {
            best = std::move(result);
        }
    }
    return best;
}

inline RunRecord run_paired(const Matrix& data, const ProblemSpec& prob,
                            std::size_t problem_index, int run_index,
                            std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    LloydConfig lloyd{prob.tol, prob.max_iter};

    long long baseline_iterations = 0;
    const auto t0 = clock::now();
    LloydResult km = baseline_fit(data, prob.k, prob.n_init, lloyd, seed,
                                  baseline_iterations);
    const auto t1 = clock::now();

    BreathingConfig bc;
    bc.m0 = prob.m0;
    bc.theta = prob.theta;
    bc.tol = prob.tol;
    bc.epsilon = prob.epsilon;
    bc.lloyd = lloyd;
    bc.seed.method = SeedMethod::codebook;
    bc.seed.initial = km.codebook;
    bc.seed.n_init = 1;
    bc.rng_seed = seed;
    const auto t2 = clock::now();
    FitResult bk = bkm_fit(data, prob.k, bc);
    const auto t3 = clock::now();

    const double kmpp_time = std::chrono::duration<double>(t1 - t0).count();
    // per the paired protocol the breathing time includes its k-means++ seeding
    const double bkm_time = kmpp_time + std::chrono::duration<double>(t3 - t2).count();

    RunRecord rec;
    rec.problem = problem_index;
    rec.run = run_index;
    rec.seed = seed;
    rec.paired = {km.sse, bk.sse, kmpp_time, bkm_time, seed};
    rec.cycles = bk.breathing_cycles;
    rec.lloyd_iterations = baseline_iterations + bk.lloyd_iterations;
    return rec;
}

}  // namespace detail

/// Runs every problem's paired campaign. Runs are independent and are
/// distributed over `workers` threads; each run owns the RNG stream
/// mix_seed(mix_seed(master_seed, problem_index), run_index), so the records
/// and every derived CSV are identical for any worker count.
inline BenchResult run_bench(const BenchSpec& spec, int workers = 1) {
    if (workers < 1) {
        throw std::invalid_argument("run_bench: workers must be >= 1");
    }
    if (spec.problems.empty()) {
        throw std::invalid_argument("run_bench: no problems");
    }

    std::vector<Matrix> datasets(spec.problems.size());
    std::vector<std::uint64_t> base(spec.problems.size());
    for (std::size_t p = 0; p < spec.problems.size(); ++p) {
        const ProblemSpec& prob = spec.problems[p];
        base[p] = mix_seed(spec.master_seed, p);
        try {
            if (prob.from_file) {
                datasets[p] = load_matrix(prob.file_path);
            } else {
                GenSpec gen = prob.gen;
                gen.rng_seed = prob.explicit_data_seed ? prob.data_seed : base[p];
                datasets[p] = generate(gen);
            }
            if (prob.runs < 1 || prob.k < 1 || prob.k > datasets[p].rows()) {
                throw std::invalid_argument("invalid k or runs for this data set");
            }
            if (!datasets[p].all_finite()) {
                throw std::invalid_argument("data contains non-finite values");
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("problem '" + prob.name + "': " + e.what());
        }
    }

    struct Task {
        std::size_t problem;
        int run;
    };
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < spec.problems.size(); ++p) {
        for (int r = 0; r < spec.problems[p].runs; ++r) {
            tasks.push_back({p, r});
        }
    }

    BenchResult result;
    result.records.resize(tasks.size());
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto work = [&]() {
        for (;;) {
            const std::size_t t = cursor.fetch_add(1);
            if (t >= tasks.size() || failed.load()) {
                return;
            }
            const Task task = tasks[t];
            try {
                const std::uint64_t seed =
                    mix_seed(base[task.problem], static_cast<std::uint64_t>(task.run));
                result.records[t] = detail::run_paired(datasets[task.problem],
                                                       spec.problems[task.problem],
                                                       task.problem, task.run, seed);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                failed.store(true);
                return;
            }
        }
    };

    const std::size_t thread_count =
        std::min<std::size_t>(static_cast<std::size_t>(workers), tasks.size());
    if (thread_count <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (std::size_t i = 0; i < thread_count; ++i) {
            pool.emplace_back(work);
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::size_t offset = 0;
    for (std::size_t p = 0; p < spec.problems.size(); ++p) {
        const ProblemSpec& prob = spec.problems[p];
        std::vector<PairedRun> runs;
        runs.reserve(prob.runs);
        for (int r = 0; r < prob.runs; ++r) {
            runs.push_back(result.records[offset + r].paired);
        }
        offset += prob.runs;
        ExperimentReport report = aggregate(runs);
        report.problem = prob.name;
        report.n = datasets[p].rows();
        report.d = datasets[p].cols();
        report.k = prob.k;
        result.reports.push_back(std::move(report));
    }
    return result;
}

/// Deterministic per-run CSV: identical for identical specs and master seed,
/// regardless of worker count (timings live in times_csv instead).
inline std::string runs_csv(const BenchResult& result, const BenchSpec& spec) {
    std::ostringstream out;
    out << "problem,run,seed,sse_kmpp,sse_bkm,delta_sse,cycles,lloyd_iterations\n";
    for (const RunRecord& rec : result.records) {
        out << spec.problems[rec.problem].name << ',' << rec.run << ',' << rec.seed << ','
            << format_full(rec.paired.sse_kmpp) << ',' << format_full(rec.paired.sse_bkm) << ','
            << format_full(delta_sse(rec.paired.sse_kmpp, rec.paired.sse_bkm).value) << ','
            << rec.cycles << ',' << rec.lloyd_iterations << '\n';
    }
    return out.str();
}

/// Wall-clock sidecar; environment-dependent by nature and therefore kept
/// out of the deterministic CSV.
inline std::string times_csv(const BenchResult& result, const BenchSpec& spec) {
    std::ostringstream out;
    out << "problem,run,cpu_kmpp_s,cpu_bkm_s,delta_cpu\n";
    char buf[96];
    for (const RunRecord& rec : result.records) {
        std::snprintf(buf, sizeof(buf), ",%d,%.6f,%.6f,%.6f", rec.run,
                      rec.paired.cpu_kmpp, rec.paired.cpu_bkm,
                      delta_cpu(rec.paired.cpu_kmpp, rec.paired.cpu_bkm).value);
        out << spec.problems[rec.problem].name << buf << '\n';
    }
    return out.str();
}

/// Aligned text table, one row per problem.
inline std::string report_table(const BenchResult& result) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-16s %8s %4s %5s %5s %20s %20s %10s %10s",
                  "data set", "n", "d", "k", "runs",
                  "mean SSE(km++)", "mean SSE(bkm)", "dSSE", "dCPU");
    out << buf << '\n';
    for (const ExperimentReport& r : result.reports) {
        char kmpp[40], bkm[40];
        std::snprintf(kmpp, sizeof(kmpp), "%.3E +-%5.2f%%", r.mean_sse_kmpp,
                      100.0 * r.rel_std_kmpp);
        std::snprintf(bkm, sizeof(bkm), "%.3E +-%5.2f%%", r.mean_sse_bkm,
                      100.0 * r.rel_std_bkm);
        std::snprintf(buf, sizeof(buf), "%-16s %8zu %4zu %5zu %5zu %20s %20s %9.2f%% %9.1f%%",
                      r.problem.c_str(), r.n, r.d, r.k, r.runs, kmpp, bkm,
                      100.0 * r.mean_delta_sse, 100.0 * r.mean_delta_cpu);
        out << buf << '\n';
    }
    return out.str();
}

}  // namespace bkmeans

#endif
