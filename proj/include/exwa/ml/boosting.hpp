#pragma once

#include "exwa/ml/tree.hpp"

#include <vector>

namespace exwa::ml {

struct BoostingParams {
    std::size_t rounds = 200;
    double learning_rate = 0.1;
    int max_depth = 3;
    std::size_t min_samples_leaf = 1;
};

/// Squared-loss gradient boosting: start from mean(y), then each round fits a
/// shallow tree to the residuals and adds it with shrinkage.
class GradientBoostedTrees {
public:
    void fit(const Matrix& X, std::span<const double> y, const BoostingParams& params);

    double predict_row(std::span<const double> x) const;
    std::vector<double> predict(const Matrix& X) const;

    double base_score() const noexcept { return base_; }
    std::size_t rounds() const noexcept { return trees_.size(); }
    /// Training MSE before any tree, then after each round.
    const std::vector<double>& loss_history() const noexcept { return loss_; }

private:
    double base_ = 0.0;
    double learning_rate_ = 0.1;
    std::vector<RegressionTree> trees_;
    std::vector<double> loss_;
};

}  // namespace exwa::ml
