#ifndef BKMEANS_MATRIX_HPP
#define BKMEANS_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bkmeans {

/// Dense row-major matrix of doubles. Used both for data sets (one row per
/// point) and codebooks (one row per centroid).
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {
        if (cols == 0) {
            throw std::invalid_argument("Matrix: cols must be >= 1");
        }
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m;
        for (const auto& r : rows) {
            if (m.rows_ == 0) {
                m.cols_ = r.size();
                if (m.cols_ == 0) {
                    throw std::invalid_argument("Matrix: empty row");
                }
            } else if (r.size() != m.cols_) {
                throw std::invalid_argument("Matrix: ragged rows");
            }
            m.values_.insert(m.values_.end(), r.begin(), r.end());
            ++m.rows_;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    double* row(std::size_t i) { return values_.data() + i * cols_; }
    const double* row(std::size_t i) const { return values_.data() + i * cols_; }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Appends a copy of `src` (cols() doubles). Sets the width on the first
    /// append of a default-constructed matrix.
    void append_row(const double* src, std::size_t len) {
        if (rows_ == 0 && cols_ == 0) {
            cols_ = len;
        }
        if (len != cols_ || len == 0) {
            throw std::invalid_argument("Matrix::append_row: wrong row length");
        }
        values_.insert(values_.end(), src, src + len);
        ++rows_;
    }

    void reserve_rows(std::size_t n) { values_.reserve(n * cols_); }

    bool all_finite() const {
        return std::all_of(values_.begin(), values_.end(),
                           [](double v) { return std::isfinite(v); });
    }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

inline double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.values()) {
        s += v * v;
    }
    return std::sqrt(s);
}

/// Relative Frobenius norm of the step `from -> to`, i.e.
/// ||to - from||_F / max(||from||_F, machine epsilon).
inline double relative_shift(const Matrix& from, const Matrix& to) {
    if (from.rows() != to.rows() || from.cols() != to.cols()) {
        throw std::invalid_argument("relative_shift: shape mismatch");
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < from.values().size(); ++i) {
        const double d = to.values()[i] - from.values()[i];
        diff += d * d;
    }
    const double base = std::max(frobenius_norm(from), std::numeric_limits<double>::epsilon());
    return std::sqrt(diff) / base;
}

/// Copies the rows of `m` whose index is not flagged in `drop`, preserving order.
inline Matrix drop_rows(const Matrix& m, const std::vector<char>& drop) {
    if (drop.size() != m.rows()) {
        throw std::invalid_argument("drop_rows: mask size mismatch");
    }
    Matrix out(0, m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (!drop[i]) {
            out.append_row(m.row(i), m.cols());
        }
    }
    return out;
}

}  // namespace bkmeans

#endif
