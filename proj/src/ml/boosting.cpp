#include "exwa/ml/boosting.hpp"

#include "exwa/error.hpp"

#include <numeric>

namespace exwa::ml {

namespace {

double mse(std::span<const double> residual) {
    double s = 0.0;
    for (double r : residual) s += r * r;
    return s / static_cast<double>(residual.size());
}

}  // namespace

void GradientBoostedTrees::fit(const Matrix& X, std::span<const double> y, const BoostingParams& params) {
    if (X.rows() != y.size()) fail(ErrorKind::shape, "feature rows and targets differ in length");
    if (X.rows() == 0) fail(ErrorKind::too_small, "boosting needs training rows");
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
        fail(ErrorKind::domain, "learning rate must lie in (0, 1]");
    }

    base_ = stable_mean(y);
    learning_rate_ = params.learning_rate;
    trees_.clear();
    loss_.clear();

    std::vector<double> residual(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) residual[i] = y[i] - base_;
    loss_.push_back(mse(residual));

    std::vector<std::size_t> rows(X.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    TreeParams tree_params{params.max_depth, params.min_samples_leaf, 0};
    Rng unused(0);  // all features are examined, so the tree never draws

    for (std::size_t round = 0; round < params.rounds; ++round) {
        RegressionTree tree;
        tree.fit(X, residual, rows, tree_params, unused);
        for (std::size_t i = 0; i < residual.size(); ++i) {
            residual[i] -= learning_rate_ * tree.predict_row(X.row(i));
        }
        loss_.push_back(mse(residual));
        trees_.push_back(std::move(tree));
    }
}

double GradientBoostedTrees::predict_row(std::span<const double> x) const {
    double f = base_;
    for (const auto& tree : trees_) f += learning_rate_ * tree.predict_row(x);
    return f;
}

std::vector<double> GradientBoostedTrees::predict(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_row(X.row(r));
    return out;
}

}  // namespace exwa::ml
