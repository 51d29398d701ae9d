// Command-line front end: dataset generation, single fits, paired benchmark
// campaigns and SVG scatter plots.
//
// Exit codes: 0 success, 1 usage error, 2 data error (unreadable or
// malformed input, impossible k), 3 runtime failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bkmeans/bkmeans.hpp"

namespace {

struct GenArgs {
    std::string family;
    std::string out;
    std::string centers_out;
    std::string centers_in;
    std::uint64_t seed = 0;
    std::size_t n = 1000;
    std::size_t rows = 5, cols = 5;
    double sigma_x = 0.08, sigma_y = 0.16, spacing = 1.0;
    std::size_t dim = 15, clusters = 25;
    double side = 500.0, sigma = 1.0;
};

struct FitArgs {
    std::string data;
    std::string algo = "bkm";
    std::string init = "kmeanspp";
    std::string out;
    std::size_t k = 8;
    int n_init = 10;
    int m = 5;
    double theta = 1.1;
    double tol = 1e-4;
    double epsilon = 0.01;
    int max_iter = 300;
    std::uint64_t seed = 0;
    int runs = 1;
};

struct BenchArgs {
    std::string spec;
    std::string out_dir = "bench-out";
    int workers = 0;
};

struct PlotArgs {
    std::string data;
    std::vector<std::string> codebooks;
    std::string out;
    std::size_t ax = 0;
    std::size_t ay = 1;
};

int run_gen(const GenArgs& a) {
    using namespace bkmeans;
    Rng rng(a.seed);
    Matrix points;
    if (a.family == "uniform") {
        points = gen_uniform_square(a.n, rng);
    } else if (a.family == "gaussian-grid") {
        points = gen_gaussian_grid(a.rows, a.cols, a.n, a.sigma_x, a.sigma_y, a.spacing, rng);
    } else if (a.family == "norm25") {
        ClusteredData data = gen_norm25_style(a.n, a.dim, a.clusters, a.side, a.sigma, rng);
        if (!a.centers_out.empty()) {
            save_matrix(a.centers_out, data.centers);
            std::printf("wrote %s: g=%zu d=%zu\n", a.centers_out.c_str(),
                        data.centers.rows(), data.centers.cols());
        }
        points = std::move(data.points);
    } else {  // mixture
        Matrix centers = load_matrix(a.centers_in);
        points = gen_gaussian_mixture(mixture_even(centers, a.n, a.sigma), rng);
    }
    save_matrix(a.out, points);
    std::printf("wrote %s: n=%zu d=%zu seed=%llu\n", a.out.c_str(), points.rows(),
                points.cols(), static_cast<unsigned long long>(a.seed));
    return 0;
}

int run_fit(const FitArgs& a) {
    using namespace bkmeans;
    const Matrix data = load_matrix(a.data);
    if (a.k < 1 || a.k > data.rows()) {
        throw std::invalid_argument("fit: need 1 <= k <= number of data points (" +
                                    std::to_string(data.rows()) + ")");
    }

    SeedConfig seed_cfg;
    seed_cfg.n_init = a.n_init;
    if (a.init == "kmeanspp") {
        seed_cfg.method = SeedMethod::kmeanspp;
    } else if (a.init == "random") {
        seed_cfg.method = SeedMethod::random;
    } else if (a.init.rfind("file:", 0) == 0) {
        seed_cfg.method = SeedMethod::codebook;
        seed_cfg.initial = load_matrix(a.init.substr(5));
    } else {
        throw std::invalid_argument("fit: --init must be kmeanspp, random or file:PATH");
    }
    const LloydConfig lloyd{a.tol, a.max_iter};

    Matrix best_codebook;
    double best_sse = 0.0;
    for (int run = 0; run < a.runs; ++run) {
        const std::uint64_t run_seed =
            run == 0 ? a.seed : mix_seed(a.seed, static_cast<std::uint64_t>(run));
        if (a.algo == "kmpp") {
            seed_cfg.rng_seed = run_seed;
            const auto t0 = std::chrono::steady_clock::now();
            SeedFitResult r = seed_and_fit(data, a.k, seed_cfg, lloyd);
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("run %d: seed %llu  SSE %.10g  lloyd iterations %lld  wall %.3f s\n",
                        run, static_cast<unsigned long long>(run_seed), r.best.sse,
                        r.lloyd_iterations, wall);
            if (run == 0 || r.best.sse < best_sse) {
                best_sse = r.best.sse;
                best_codebook = std::move(r.best.codebook);
            }
        } else if (a.algo == "bkm") {
            BreathingConfig cfg;
            cfg.m0 = a.m;
            cfg.theta = a.theta;
            cfg.tol = a.tol;
            cfg.epsilon = a.epsilon;
            cfg.lloyd = lloyd;
            cfg.seed = seed_cfg;
            cfg.rng_seed = run_seed;
            FitResult r = bkm_fit(data, a.k, cfg);
            std::printf("run %d: seed %llu  SSE %.10g  seeding SSE %.10g  cycles %d"
                        "  lloyd iterations %lld  wall %.3f s\n",
                        run, static_cast<unsigned long long>(run_seed), r.sse, r.seeding_sse,
                        r.breathing_cycles, r.lloyd_iterations, r.wall_seconds);
            if (run == 0 || r.sse < best_sse) {
                best_sse = r.sse;
                best_codebook = std::move(r.codebook);
            }
        } else {
            throw std::invalid_argument("fit: --algo must be kmpp or bkm");
        }
    }
    if (a.runs > 1) {
        std::printf("best SSE %.10g\n", best_sse);
    }
    if (!a.out.empty()) {
        save_matrix(a.out, best_codebook);
        std::printf("wrote codebook %s: k=%zu d=%zu\n", a.out.c_str(), best_codebook.rows(),
                    best_codebook.cols());
    }
    return 0;
}

int run_bench(const BenchArgs& a) {
    using namespace bkmeans;
    const BenchSpec spec = load_bench_spec(a.spec);
    int workers = a.workers;
    if (workers <= 0) {
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    const BenchResult result = bkmeans::run_bench(spec, workers);

    std::filesystem::create_directories(a.out_dir);
    const auto write_file = [&](const std::string& name, const std::string& body) {
        const std::string path = a.out_dir + "/" + name;
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot open '" + path + "' for writing");
        }
        out << body;
        if (!out.flush()) {
            throw std::runtime_error("error writing '" + path + "'");
        }
    };
    const std::string table = report_table(result);
    write_file("report.txt", table);
    write_file("runs.csv", runs_csv(result, spec));
    write_file("times.csv", times_csv(result, spec));
    std::fputs(table.c_str(), stdout);
    std::printf("wrote %s/report.txt, runs.csv, times.csv (%zu runs, %d workers)\n",
                a.out_dir.c_str(), result.records.size(), workers);
    return 0;
}

int run_plot(const PlotArgs& a) {
    using namespace bkmeans;
    const Matrix data = load_matrix(a.data);
    std::vector<Matrix> codebooks;
    codebooks.reserve(a.codebooks.size());
    for (const std::string& path : a.codebooks) {
        codebooks.push_back(load_matrix(path));
    }
    PlotOptions opt;
    opt.axis_x = a.ax;
    opt.axis_y = a.ay;
    std::ofstream out(a.out);
    if (!out) {
        throw std::runtime_error("cannot open '" + a.out + "' for writing");
    }
    write_scatter_svg(out, data, codebooks, opt);
    if (!out.flush()) {
        throw std::runtime_error("error writing '" + a.out + "'");
    }
    std::size_t centroids = 0;
    for (const Matrix& cb : codebooks) {
        centroids += cb.rows();
    }
    std::printf("wrote %s: %zu points, %zu centroids\n", a.out.c_str(), data.rows(), centroids);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"breathing k-means: fits, synthetic data sets, paired benchmarks, plots"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* cmd_gen = app.add_subcommand("gen", "generate a synthetic data set");
    cmd_gen->require_subcommand(1);
    const auto add_gen_common = [&](CLI::App* sub) {
        sub->add_option("-o,--out", gen.out, "output data file")->required();
        sub->add_option("--seed", gen.seed, "RNG seed");
        sub->add_option("--n", gen.n, "number of points");
    };
    CLI::App* gen_uniform = cmd_gen->add_subcommand("uniform", "uniform points on the unit square");
    add_gen_common(gen_uniform);
    CLI::App* gen_grid = cmd_gen->add_subcommand("gaussian-grid", "Gaussian clusters on a 2D grid");
    add_gen_common(gen_grid);
    gen_grid->add_option("--rows", gen.rows, "grid rows");
    gen_grid->add_option("--cols", gen.cols, "grid columns");
    gen_grid->add_option("--sigma-x", gen.sigma_x, "horizontal std dev");
    gen_grid->add_option("--sigma-y", gen.sigma_y, "vertical std dev");
    gen_grid->add_option("--spacing", gen.spacing, "grid spacing");
    CLI::App* gen_norm25 = cmd_gen->add_subcommand(
        "norm25", "well-separated Gaussians around random high-dimensional centers");
    add_gen_common(gen_norm25);
    gen_norm25->add_option("--d", gen.dim, "dimensionality");
    gen_norm25->add_option("--g", gen.clusters, "number of clusters");
    gen_norm25->add_option("--side", gen.side, "hypercube side length");
    gen_norm25->add_option("--sigma", gen.sigma, "cluster std dev");
    gen_norm25->add_option("--centers-out", gen.centers_out, "also write the true centers");
    CLI::App* gen_mix = cmd_gen->add_subcommand("mixture", "Gaussian mixture around given centers");
    add_gen_common(gen_mix);
    gen_mix->add_option("--centers", gen.centers_in, "centers file (one center per line)")
        ->required();
    gen_mix->add_option("--sigma", gen.sigma, "cluster std dev");

    FitArgs fit;
    CLI::App* cmd_fit = app.add_subcommand("fit", "fit a codebook to a data set");
    cmd_fit->add_option("data", fit.data, "data file")->required();
    cmd_fit->add_option("--k", fit.k, "number of centroids");
    cmd_fit->add_option("--algo", fit.algo, "kmpp or bkm");
    cmd_fit->add_option("--init", fit.init, "kmeanspp, random or file:PATH");
    cmd_fit->add_option("--n-init", fit.n_init, "seeding restarts");
    cmd_fit->add_option("--m", fit.m, "initial breathing depth");
    cmd_fit->add_option("--theta", fit.theta, "freezing range");
    cmd_fit->add_option("--tol", fit.tol, "convergence / improvement tolerance");
    cmd_fit->add_option("--epsilon", fit.epsilon, "insertion offset scale");
    cmd_fit->add_option("--max-iter", fit.max_iter, "max Lloyd iterations");
    cmd_fit->add_option("--seed", fit.seed, "RNG seed (run r > 0 uses a stream derived from it)");
    cmd_fit->add_option("--runs", fit.runs, "repeat the fit this many times, keep the best");
    cmd_fit->add_option("-o,--out", fit.out, "write the best codebook here");

    BenchArgs bench;
    CLI::App* cmd_bench = app.add_subcommand("bench", "run a paired benchmark campaign");
    cmd_bench->add_option("spec", bench.spec, "benchmark spec file")->required();
    cmd_bench->add_option("-o,--out", bench.out_dir, "output directory");
    cmd_bench->add_option("--workers", bench.workers, "worker threads (default: hardware)");

    PlotArgs plot;
    CLI::App* cmd_plot = app.add_subcommand("plot", "render data and codebooks as an SVG");
    cmd_plot->add_option("data", plot.data, "data file")->required();
    cmd_plot->add_option("-c,--codebook", plot.codebooks, "codebook file (repeatable)");
    cmd_plot->add_option("-o,--out", plot.out, "output SVG file")->required();
    cmd_plot->add_option("--ax", plot.ax, "column for the x axis");
    cmd_plot->add_option("--ay", plot.ay, "column for the y axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen_uniform->parsed()) {
            gen.family = "uniform";
            return run_gen(gen);
        }
        if (gen_grid->parsed()) {
            gen.family = "gaussian-grid";
            return run_gen(gen);
        }
        if (gen_norm25->parsed()) {
            gen.family = "norm25";
            return run_gen(gen);
        }
        if (gen_mix->parsed()) {
            gen.family = "mixture";
            return run_gen(gen);
        }
        if (cmd_fit->parsed()) {
            return run_fit(fit);
        }
        if (cmd_bench->parsed()) {
            return run_bench(bench);
        }
        if (cmd_plot->parsed()) {
            return run_plot(plot);
        }
        std::fputs("no subcommand given\n", stderr);
        return 1;
    } catch (const bkmeans::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
