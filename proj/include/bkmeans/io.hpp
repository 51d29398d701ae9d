#ifndef BKMEANS_IO_HPP
#define BKMEANS_IO_HPP

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bkmeans/matrix.hpp"

namespace bkmeans {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& message)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {
inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

inline double parse_number(const std::string& token, const std::string& source,
                           std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || token.empty()) {
        throw ParseError(source, line, "not a number: '" + token + "'");
    }
    if (!std::isfinite(v)) {
        throw ParseError(source, line, "non-finite value: '" + token + "'");
    }
    return v;
}
}  // namespace detail

/// Reads a whitespace-separated numeric table: one point per line, d columns,
/// lines starting with '#' (after optional leading whitespace) ignored.
/// Raises ParseError with a 1-based line number on malformed input.
inline Matrix parse_matrix(std::istream& in, const std::string& source = "<stream>") {
    Matrix out;
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = detail::trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        row.clear();
        std::istringstream fields{std::string(body)};
        std::string token;
        while (fields >> token) {
            row.push_back(detail::parse_number(token, source, line_no));
        }
        if (out.rows() > 0 && row.size() != out.cols()) {
            throw ParseError(source, line_no,
                             "expected " + std::to_string(out.cols()) + " columns, got " +
                                 std::to_string(row.size()));
        }
        out.append_row(row.data(), row.size());
    }
    if (out.rows() == 0) {
        throw ParseError(source, line_no, "no data rows");
    }
    return out;
}

inline Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for reading");
    }
    return parse_matrix(in, path);
}

/// Shortest-round-trip style formatting: %.17g reproduces the exact double
/// on load, so generate -> save -> load is bit-exact.
inline std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) {
                out << ' ';
            }
            out << format_full(row[j]);
        }
        out << '\n';
    }
}

inline void save_matrix(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    write_matrix(out, m);
    if (!out.flush()) {
        throw std::runtime_error("error writing '" + path + "'");
    }
}

}  // namespace bkmeans

#endif
