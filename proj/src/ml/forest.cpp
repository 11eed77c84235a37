#include "exwa/ml/forest.hpp"

#include "exwa/error.hpp"

#include <numeric>
#include <string>

namespace exwa::ml {

namespace {

RegressionTree grow_tree(const Matrix& X, std::span<const double> y, const ForestParams& params,
                         const TreeParams& tree_params, std::uint64_t seed, std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<std::size_t> rows(X.rows());
    if (params.bootstrap) {
        for (auto& r : rows) r = rng.index(X.rows());
    } else {
        std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    RegressionTree tree;
    tree.fit(X, y, rows, tree_params, rng);
    return tree;
}

}  // namespace

void RandomForest::fit(const Matrix& X, std::span<const double> y, const ForestParams& params, std::uint64_t seed,
                       Execution exec) {
    if (X.rows() != y.size()) fail(ErrorKind::shape, "feature rows and targets differ in length");
    if (X.rows() == 0) fail(ErrorKind::too_small, "random forest needs training rows");
    if (params.trees == 0) fail(ErrorKind::domain, "random forest needs at least one tree");

    features_ = X.cols();
    TreeParams tree_params;
    tree_params.max_depth = params.max_depth;
    tree_params.min_samples_leaf = params.min_samples_leaf;
    tree_params.max_features = params.max_features == 0 ? (features_ + 2) / 3 : params.max_features;

    trees_.assign(params.trees, RegressionTree{});
    const auto count = static_cast<std::ptrdiff_t>(params.trees);
    if (exec == Execution::serial) {
        for (std::ptrdiff_t t = 0; t < count; ++t) {
            trees_[t] = grow_tree(X, y, params, tree_params, seed, static_cast<std::size_t>(t));
        }
        return;
    }
    std::vector<std::string> errors(params.trees);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        try {
            trees_[t] = grow_tree(X, y, params, tree_params, seed, static_cast<std::size_t>(t));
        } catch (const std::exception& e) {
            errors[t] = e.what();
        }
    }
    for (const auto& e : errors) {
        if (!e.empty()) fail(ErrorKind::solver_failure, "tree growth failed: " + e);
    }
}

double RandomForest::predict_row(std::span<const double> x) const {
    if (trees_.empty()) fail(ErrorKind::usage, "random forest used before fit");
    std::vector<double> votes(trees_.size());
    for (std::size_t t = 0; t < trees_.size(); ++t) votes[t] = trees_[t].predict_row(x);
    return stable_mean(votes);
}

std::vector<double> RandomForest::predict(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_row(X.row(r));
    return out;
}

FeatureImportance RandomForest::feature_importance() const {
    FeatureImportance out;
    out.values.assign(features_, 0.0);
    std::size_t contributing = 0;
    for (const auto& tree : trees_) {
        const auto& dec = tree.impurity_decrease();
        const double total = std::accumulate(dec.begin(), dec.end(), 0.0);
        if (total <= 0.0) continue;
        ++contributing;
        for (std::size_t f = 0; f < features_; ++f) out.values[f] += dec[f] / total;
    }
    const double total = std::accumulate(out.values.begin(), out.values.end(), 0.0);
    if (contributing == 0 || total <= 0.0) {
        out.values.assign(features_, 1.0 / static_cast<double>(features_));
        out.uniform_fallback = true;
        return out;
    }
    for (double& v : out.values) v /= total;
    return out;
}

}  // namespace exwa::ml
