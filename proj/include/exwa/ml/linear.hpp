#pragma once

#include "exwa/matrix.hpp"

#include <span>
#include <vector>

namespace exwa::ml {

/// Ordinary least squares with an intercept. Rank-deficient designs get the
/// column-pivoted QR basic solution.
class LinearRegression {
public:
    void fit(const Matrix& X, std::span<const double> y);

    double predict_row(std::span<const double> x) const;
    std::vector<double> predict(const Matrix& X) const;

    const std::vector<double>& coefficients() const noexcept { return coef_; }
    double intercept() const noexcept { return intercept_; }

    /// Builds a model from known parameters.
    static LinearRegression from_parameters(std::vector<double> coefficients, double intercept);

private:
    std::vector<double> coef_;
    double intercept_ = 0.0;
};

enum class SvrLoss {
    squared_epsilon_insensitive,  // max(0, |r| - eps)^2
    epsilon_insensitive,          // max(0, |r| - eps)
};

struct SvrParams {
    double epsilon = 0.1;  // tube half-width, in standardised target units
    double l2 = 1e-3;      // penalty lambda/2 |w|^2
    std::size_t epochs = 2000;
    /// Constant step for the squared loss; rate / sqrt(t + 1) for the
    /// non-smooth one.
    double learning_rate = 0.1;
    SvrLoss loss = SvrLoss::squared_epsilon_insensitive;
};

/// Linear support-vector regression trained by full-batch (sub)gradient
/// descent on  lambda/2 |w|^2 + mean(loss(z - w.x - b)), where z is the
/// standardised target. Keeps the best iterate seen.
class LinearSvr {
public:
    void fit(const Matrix& X, std::span<const double> y, const SvrParams& params);

    double predict_row(std::span<const double> x) const;
    std::vector<double> predict(const Matrix& X) const;

    const std::vector<double>& weights() const noexcept { return w_; }
    double bias() const noexcept { return b_; }
    /// Best objective after each epoch (non-increasing by construction).
    const std::vector<double>& loss_history() const noexcept { return loss_; }

private:
    std::vector<double> w_;
    double b_ = 0.0;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    std::vector<double> loss_;
};

}  // namespace exwa::ml
