#include "exwa/ml/tree.hpp"

#include "exwa/error.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace exwa::ml {

double stable_mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double mean = values.front();
    for (std::size_t k = 1; k < values.size(); ++k) mean += (values[k] - mean) / static_cast<double>(k + 1);
    return mean;
}

void RegressionTree::fit(const Matrix& X, std::span<const double> y, std::span<const std::size_t> rows,
                         const TreeParams& params, Rng& rng) {
    if (rows.empty()) fail(ErrorKind::too_small, "cannot grow a tree on zero rows");
    const std::size_t p = X.cols();
    const std::size_t min_leaf = std::max<std::size_t>(1, params.min_samples_leaf);
    const std::size_t k = (params.max_features == 0 || params.max_features >= p) ? p : params.max_features;

    nodes_.clear();
    decrease_.assign(p, 0.0);

    std::vector<std::size_t> idx(rows.begin(), rows.end());
    std::vector<std::size_t> features(p);
    std::iota(features.begin(), features.end(), std::size_t{0});
    std::vector<std::size_t> candidates;
    std::vector<std::pair<double, double>> xy;
    std::vector<double> node_y;

    struct Task {
        int node;
        std::size_t begin;
        std::size_t end;
    };
    std::vector<Task> stack{{0, 0, idx.size()}};
    nodes_.push_back(Node{});

    while (!stack.empty()) {
        const Task task = stack.back();
        stack.pop_back();
        const std::size_t n = task.end - task.begin;

        node_y.resize(n);
        for (std::size_t r = 0; r < n; ++r) node_y[r] = y[idx[task.begin + r]];
        const double mean = stable_mean(node_y);
        double sst = 0.0;
        for (double v : node_y) sst += (v - mean) * (v - mean);
        nodes_[task.node].value = mean;

        const int depth = nodes_[task.node].depth;
        if (sst <= 0.0 || n < 2 * min_leaf || (params.max_depth > 0 && depth >= params.max_depth)) continue;

        if (k < p) {
            for (std::size_t i = 0; i < k; ++i) std::swap(features[i], features[i + rng.index(p - i)]);
            candidates.assign(features.begin(), features.begin() + static_cast<std::ptrdiff_t>(k));
            std::sort(candidates.begin(), candidates.end());
        } else {
            candidates = features;
            std::sort(candidates.begin(), candidates.end());
        }

        double best_gain = 0.0;
        int best_feature = -1;
        double best_threshold = 0.0;
        for (std::size_t f : candidates) {
            xy.resize(n);
            double total = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const std::size_t row = idx[task.begin + r];
                xy[r] = {X(row, f), y[row]};
                total += y[row];
            }
            std::sort(xy.begin(), xy.end());
            const double base = total * total / static_cast<double>(n);
            double left_sum = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left_sum += xy[i].second;
                if (xy[i].first == xy[i + 1].first) continue;
                const std::size_t n_left = i + 1;
                const std::size_t n_right = n - n_left;
                if (n_left < min_leaf || n_right < min_leaf) continue;
                const double right_sum = total - left_sum;
                const double gain = left_sum * left_sum / static_cast<double>(n_left) +
                                    right_sum * right_sum / static_cast<double>(n_right) - base;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    double mid = 0.5 * (xy[i].first + xy[i + 1].first);
                    if (!(mid < xy[i + 1].first)) mid = xy[i].first;
                    best_threshold = mid;
                }
            }
        }
        if (best_feature < 0 || best_gain <= sst * 1e-12) continue;

        const auto f = static_cast<std::size_t>(best_feature);
        const auto first = idx.begin() + static_cast<std::ptrdiff_t>(task.begin);
        const auto last = idx.begin() + static_cast<std::ptrdiff_t>(task.end);
        const auto mid = std::stable_partition(first, last, [&](std::size_t row) { return X(row, f) <= best_threshold; });
        const auto split_at = task.begin + static_cast<std::size_t>(mid - first);

        decrease_[f] += best_gain;
        const int left = static_cast<int>(nodes_.size());
        const int right = left + 1;
        Node child;
        child.depth = depth + 1;
        nodes_.push_back(child);
        nodes_.push_back(child);
        Node& node = nodes_[task.node];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left;
        node.right = right;
        stack.push_back({right, split_at, task.end});
        stack.push_back({left, task.begin, split_at});
    }
}

double RegressionTree::predict_row(std::span<const double> x) const {
    if (nodes_.empty()) fail(ErrorKind::usage, "tree used before fit");
    std::size_t at = 0;
    while (nodes_[at].feature >= 0) {
        const auto& node = nodes_[at];
        at = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                    : node.right);
    }
    return nodes_[at].value;
}

std::size_t RegressionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

int RegressionTree::depth() const {
    int d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
}

}  // namespace exwa::ml
