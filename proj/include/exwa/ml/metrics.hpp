#pragma once

#include <cstddef>
#include <span>

namespace exwa::ml {

struct Metrics {
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t n = 0;
};

/// sqrt(mean squared error); the 1/n makes it comparable with MAE.
double rmse(std::span<const double> y_true, std::span<const double> y_pred);
double mae(std::span<const double> y_true, std::span<const double> y_pred);
Metrics evaluate(std::span<const double> y_true, std::span<const double> y_pred);

}  // namespace exwa::ml
