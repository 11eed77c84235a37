#pragma once

#include "exwa/matrix.hpp"
#include "exwa/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace exwa::ml {

struct TreeParams {
    int max_depth = 0;  // 0 = unlimited
    std::size_t min_samples_leaf = 1;
    std::size_t max_features = 0;  // features examined per split; 0 = all
};

/// CART regression tree on squared error. Split search visits features in
/// ascending index order and thresholds in ascending order, keeping the first
/// strictly best candidate, so ties go to the lowest feature then the lowest
/// threshold.
class RegressionTree {
public:
    /// Fits on `rows` of X (repeats allowed, as in a bootstrap sample).
    /// `rng` is only drawn from when max_features < feature count.
    void fit(const Matrix& X, std::span<const double> y, std::span<const std::size_t> rows, const TreeParams& params,
             Rng& rng);

    double predict_row(std::span<const double> x) const;

    /// Total squared-error reduction credited to each feature.
    const std::vector<double>& impurity_decrease() const noexcept { return decrease_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t leaf_count() const;
    int depth() const;

private:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
        int depth = 0;
    };

    std::vector<Node> nodes_;
    std::vector<double> decrease_;
};

/// Mean by running update; exact when all values are equal.
double stable_mean(std::span<const double> values);

}  // namespace exwa::ml
