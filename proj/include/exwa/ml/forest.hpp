#pragma once

#include "exwa/execution.hpp"
#include "exwa/ml/tree.hpp"

#include <cstdint>
#include <vector>

namespace exwa::ml {

struct ForestParams {
    std::size_t trees = 100;
    std::size_t min_samples_leaf = 2;
    std::size_t max_features = 0;  // 0 = ceil(p / 3)
    int max_depth = 0;
    bool bootstrap = true;
};

struct FeatureImportance {
    std::vector<double> values;  // sums to 1
    bool uniform_fallback = false;
};

/// Bagged regression trees. Tree t draws from its own stream
/// derive_seed(seed, t), so the fitted forest is the same for any thread
/// count and for the serial reference path.
class RandomForest {
public:
    void fit(const Matrix& X, std::span<const double> y, const ForestParams& params, std::uint64_t seed,
             Execution exec = Execution::parallel);

    double predict_row(std::span<const double> x) const;
    std::vector<double> predict(const Matrix& X) const;

    /// Per-tree normalised impurity decrease, averaged over trees that split,
    /// renormalised. Uniform (flagged) when no tree ever split.
    FeatureImportance feature_importance() const;

    const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
    std::size_t feature_count() const noexcept { return features_; }

private:
    std::vector<RegressionTree> trees_;
    std::size_t features_ = 0;
};

}  // namespace exwa::ml
