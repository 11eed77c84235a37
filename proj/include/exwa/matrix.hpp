#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace exwa {

/// Dense row-major matrix of doubles; the carrier for feature tables.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        assert(data_.size() == rows_ * cols_);
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    void append_row(std::span<const double> values) {
        assert(values.size() == cols_);
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Rows `indices` of `m`, in the given order.
Matrix select_rows(const Matrix& m, std::span<const std::size_t> indices);

/// Horizontal concatenation [a | b]; row counts must match.
Matrix hconcat(const Matrix& a, const Matrix& b);

/// Vertical concatenation [a ; b]; column counts must match.
Matrix vconcat(const Matrix& a, const Matrix& b);

}  // namespace exwa
