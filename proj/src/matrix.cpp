#include "exwa/matrix.hpp"

#include "exwa/error.hpp"

#include <algorithm>
#include <string>

namespace exwa {

Matrix select_rows(const Matrix& m, std::span<const std::size_t> indices) {
    Matrix out(indices.size(), m.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = m.row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        fail(ErrorKind::shape, "hconcat row mismatch: " + std::to_string(a.rows()) + " vs " +
                                   std::to_string(b.rows()));
    }
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto dst = out.row(r);
        std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
        std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
    }
    return out;
}

Matrix vconcat(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        fail(ErrorKind::shape, "vconcat column mismatch: " + std::to_string(a.cols()) + " vs " +
                                   std::to_string(b.cols()));
    }
    std::vector<double> data = a.data();
    data.insert(data.end(), b.data().begin(), b.data().end());
    return Matrix(a.rows() + b.rows(), a.cols(), std::move(data));
}

}  // namespace exwa
