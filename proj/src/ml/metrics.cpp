#include "exwa/ml/metrics.hpp"

#include "exwa/error.hpp"

#include <cmath>
#include <string>

namespace exwa::ml {

namespace {

void check_pair(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size()) {
        fail(ErrorKind::shape, "metric inputs differ in length: " + std::to_string(y_true.size()) + " vs " +
                                   std::to_string(y_pred.size()));
    }
    if (y_true.empty()) fail(ErrorKind::shape, "metric inputs are empty");
}

}  // namespace

double rmse(std::span<const double> y_true, std::span<const double> y_pred) {
    check_pair(y_true, y_pred);
    double sum = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = y_true[i] - y_pred[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(y_true.size()));
}

double mae(std::span<const double> y_true, std::span<const double> y_pred) {
    check_pair(y_true, y_pred);
    double sum = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) sum += std::abs(y_pred[i] - y_true[i]);
    return sum / static_cast<double>(y_true.size());
}

Metrics evaluate(std::span<const double> y_true, std::span<const double> y_pred) {
    return {rmse(y_true, y_pred), mae(y_true, y_pred), y_true.size()};
}

}  // namespace exwa::ml
