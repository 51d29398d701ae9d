#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bkmeans/datagen.hpp"
#include "bkmeans/io.hpp"
#include "bkmeans/svg.hpp"
#include "test_support.hpp"

using namespace bkmeans;

TEST_CASE("parse_matrix reads whitespace tables and skips comments") {
    std::istringstream in(
        "# a comment\n"
        "\n"
        "0.5 1.5\n"
        "  # indented comment\n"
        "\t-2 3e2\n");
    const Matrix m = parse_matrix(in);
    REQUIRE(m == Matrix::from_rows({{0.5, 1.5}, {-2.0, 300.0}}));
}

TEST_CASE("parse_matrix reports the offending line") {
    SECTION("bad token") {
        std::istringstream in("1 2\n3 oops\n");
        try {
            parse_matrix(in, "data.txt");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            REQUIRE(e.line() == 2);
            REQUIRE(std::string(e.what()).find("data.txt:2") != std::string::npos);
        }
    }
    SECTION("ragged row") {
        std::istringstream in("1 2\n3\n");
        try {
            parse_matrix(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            REQUIRE(e.line() == 2);
        }
    }
    SECTION("non-finite value") {
        std::istringstream in("1 nan\n");
        REQUIRE_THROWS_AS(parse_matrix(in), ParseError);
        std::istringstream inf_in("inf 2\n");
        REQUIRE_THROWS_AS(parse_matrix(inf_in), ParseError);
    }
    SECTION("empty input") {
        std::istringstream in("# only a comment\n");
        REQUIRE_THROWS_AS(parse_matrix(in), ParseError);
    }
}

TEST_CASE("load_matrix rejects a missing file") {
    REQUIRE_THROWS_AS(load_matrix("/nonexistent/bkmeans.txt"), std::runtime_error);
}

TEST_CASE("format_full round-trips doubles exactly") {
    Rng rng(1);
    for (int t = 0; t < 500; ++t) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, double(rng.below(13)) - 6.0);
        REQUIRE(std::strtod(format_full(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("save and load are bit-exact") {
    Rng rng(2);
    const Matrix original = testsup::random_matrix(rng, 60, 3, -5.0, 5.0);
    const auto path = std::filesystem::temp_directory_path() / "bkmeans_io_roundtrip.txt";
    save_matrix(path.string(), original);
    REQUIRE(load_matrix(path.string()) == original);
    std::filesystem::remove(path);
}

TEST_CASE("scatter SVG contains one circle per point and centroid") {
    Rng rng(3);
    const Matrix data = testsup::random_matrix(rng, 1000, 2, 0.0, 1.0);
    const Matrix codebook = testsup::random_matrix(rng, 100, 2, 0.0, 1.0);
    std::ostringstream out;
    write_scatter_svg(out, data, {codebook});
    const std::string svg = out.str();
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
         pos = svg.find("<circle", pos + 1)) {
        ++circles;
    }
    REQUIRE(circles == 1100);
    REQUIRE(svg.find("<svg") != std::string::npos);
    REQUIRE(svg.rfind("</svg>\n") == svg.size() - 7);

    // determinism
    std::ostringstream again;
    write_scatter_svg(again, data, {codebook});
    REQUIRE(again.str() == svg);
}

TEST_CASE("scatter SVG without codebooks plots the data only") {
    Rng rng(4);
    const Matrix data = testsup::random_matrix(rng, 10, 2);
    std::ostringstream out;
    write_scatter_svg(out, data, {});
    std::size_t circles = 0;
    const std::string svg = out.str();
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
         pos = svg.find("<circle", pos + 1)) {
        ++circles;
    }
    REQUIRE(circles == 10);
}

TEST_CASE("scatter SVG projects selected axes of higher-dimensional data") {
    Rng rng(5);
    const Matrix data = testsup::random_matrix(rng, 20, 5);
    PlotOptions opt;
    opt.axis_x = 3;
    opt.axis_y = 4;
    std::ostringstream out;
    write_scatter_svg(out, data, {}, opt);
    REQUIRE(out.str().find("<circle") != std::string::npos);

    PlotOptions bad;
    bad.axis_x = 5;
    REQUIRE_THROWS_AS(write_scatter_svg(out, data, {}, bad), std::invalid_argument);
}

TEST_CASE("scatter SVG needs two dimensions") {
    const auto one_d = Matrix::from_rows({{0.0}, {1.0}});
    std::ostringstream out;
    REQUIRE_THROWS_AS(write_scatter_svg(out, one_d, {}), std::invalid_argument);
}

TEST_CASE("degenerate extents still produce a valid plot") {
    const auto data = Matrix::from_rows({{1.0, 2.0}, {1.0, 2.0}});
    std::ostringstream out;
    write_scatter_svg(out, data, {});
    REQUIRE(out.str().find("<circle") != std::string::npos);
}
