// Drives the installed CLI binary end to end through std::system. The
// binary path comes from the build via BKMEANS_CLI_PATH.

#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "bkmeans/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out_file = dir / "cli_output.txt";
    const std::string cmd = std::string(BKMEANS_CLI_PATH) + " " + args + " > " +
                            out_file.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    return result;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() /
                     ("bkmeans_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cli gen is deterministic and loadable") {
    TempDir tmp;
    const std::string a = (tmp.path / "a.txt").string();
    const std::string b = (tmp.path / "b.txt").string();
    REQUIRE(run_cli("gen uniform --n 200 --seed 7 -o " + a, tmp.path).exit_code == 0);
    REQUIRE(run_cli("gen uniform --n 200 --seed 7 -o " + b, tmp.path).exit_code == 0);
    REQUIRE(slurp(a) == slurp(b));
    const bkmeans::Matrix m = bkmeans::load_matrix(a);
    REQUIRE(m.rows() == 200);
    REQUIRE(m.cols() == 2);
}

TEST_CASE("cli fit writes a codebook and reduces to the baseline at m 0") {
    TempDir tmp;
    const std::string data = (tmp.path / "d.txt").string();
    REQUIRE(run_cli("gen uniform --n 120 --seed 3 -o " + data, tmp.path).exit_code == 0);

    const std::string cb_kmpp = (tmp.path / "kmpp.txt").string();
    const std::string cb_bkm0 = (tmp.path / "bkm0.txt").string();
    const CliResult kmpp = run_cli(
        "fit " + data + " --k 10 --algo kmpp --seed 5 -o " + cb_kmpp, tmp.path);
    REQUIRE(kmpp.exit_code == 0);
    REQUIRE(kmpp.output.find("SSE") != std::string::npos);
    const CliResult bkm0 = run_cli(
        "fit " + data + " --k 10 --algo bkm --m 0 --seed 5 -o " + cb_bkm0, tmp.path);
    REQUIRE(bkm0.exit_code == 0);
    REQUIRE(slurp(cb_kmpp) == slurp(cb_bkm0));
    REQUIRE(bkmeans::load_matrix(cb_kmpp).rows() == 10);

    const CliResult bkm = run_cli("fit " + data + " --k 10 --algo bkm --seed 5", tmp.path);
    REQUIRE(bkm.exit_code == 0);
    REQUIRE(bkm.output.find("cycles") != std::string::npos);
}

TEST_CASE("cli fit exit codes distinguish data errors") {
    TempDir tmp;
    const std::string bad = (tmp.path / "bad.txt").string();
    std::ofstream(bad) << "1 2\n3 oops\n";
    const CliResult parse_fail = run_cli("fit " + bad + " --k 2", tmp.path);
    REQUIRE(parse_fail.exit_code == 2);
    REQUIRE(parse_fail.output.find(":2:") != std::string::npos);  // line number

    const std::string data = (tmp.path / "ok.txt").string();
    std::ofstream(data) << "1 2\n3 4\n";
    REQUIRE(run_cli("fit " + data + " --k 5", tmp.path).exit_code == 2);  // k > n
    REQUIRE(run_cli("fit", tmp.path).exit_code == 1);                     // usage
    REQUIRE(run_cli("frobnicate", tmp.path).exit_code == 1);
}

TEST_CASE("cli plot emits one circle per element") {
    TempDir tmp;
    const std::string data = (tmp.path / "d.txt").string();
    const std::string cb = (tmp.path / "cb.txt").string();
    const std::string svg = (tmp.path / "plot.svg").string();
    REQUIRE(run_cli("gen uniform --n 50 --seed 1 -o " + data, tmp.path).exit_code == 0);
    REQUIRE(run_cli("fit " + data + " --k 5 --algo kmpp --seed 2 -o " + cb, tmp.path)
                .exit_code == 0);
    REQUIRE(run_cli("plot " + data + " -c " + cb + " -o " + svg, tmp.path).exit_code == 0);
    const std::string body = slurp(svg);
    std::size_t circles = 0;
    for (std::size_t pos = body.find("<circle"); pos != std::string::npos;
         pos = body.find("<circle", pos + 1)) {
        ++circles;
    }
    REQUIRE(circles == 55);
}

TEST_CASE("cli bench writes reports and a deterministic runs.csv") {
    TempDir tmp;
    const std::string spec = (tmp.path / "spec.txt").string();
    std::ofstream(spec) << "master_seed = 11\n"
                           "[tiny]\n"
                           "data = uniform n=100\n"
                           "k = 8\n"
                           "runs = 2\n"
                           "n_init = 3\n";
    const std::string out1 = (tmp.path / "out1").string();
    const std::string out2 = (tmp.path / "out2").string();
    const CliResult r1 = run_cli("bench " + spec + " -o " + out1 + " --workers 1", tmp.path);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r1.output.find("tiny") != std::string::npos);
    const CliResult r2 = run_cli("bench " + spec + " -o " + out2 + " --workers 4", tmp.path);
    REQUIRE(r2.exit_code == 0);
    REQUIRE(fs::exists(fs::path(out1) / "report.txt"));
    REQUIRE(fs::exists(fs::path(out1) / "times.csv"));
    REQUIRE(slurp(fs::path(out1) / "runs.csv") == slurp(fs::path(out2) / "runs.csv"));

    REQUIRE(run_cli("bench /nonexistent/spec.txt", tmp.path).exit_code == 3);
}
