#include "exwa/group/hierarchy.hpp"

#include "exwa/error.hpp"
#include "exwa/io/csv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace exwa::group {

namespace {

constexpr double kSimplexTolerance = 1e-6;

/// Mean of sorted values by running update: order-free, and exact when all
/// values are equal.
double order_free_mean(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double mean = values.front();
    for (std::size_t k = 1; k < values.size(); ++k) mean += (values[k] - mean) / static_cast<double>(k + 1);
    return mean;
}

double sum_sorted(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

Aggregation parse_aggregation(const std::string& name) {
    const auto n = io::to_lower(name);
    if (n == "arithmetic" || n == "arithmetic-mean" || n == "mean") return Aggregation::arithmetic_mean;
    if (n == "geometric" || n == "geometric-mean") return Aggregation::geometric_mean;
    fail(ErrorKind::config, "unknown aggregation '" + name + "' (expected arithmetic or geometric)");
}

std::string to_string(Aggregation method) {
    return method == Aggregation::arithmetic_mean ? "arithmetic-mean" : "geometric-mean";
}

WeightVector aggregate_weights(std::span<const WeightVector> vectors, Aggregation method) {
    if (vectors.empty()) fail(ErrorKind::shape, "no weight vectors to aggregate");
    const std::size_t n = vectors.front().weights.size();
    if (n == 0) fail(ErrorKind::shape, "weight vectors are empty");
    WeightVector out;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        const auto& v = vectors[k];
        if (v.weights.size() != n) {
            fail(ErrorKind::shape, "weight vector " + std::to_string(k + 1) + " has " +
                                       std::to_string(v.weights.size()) + " entries, expected " + std::to_string(n));
        }
        double sum = 0.0;
        for (double w : v.weights) {
            if (!(w >= 0.0)) fail(ErrorKind::domain, "weight vector " + std::to_string(k + 1) + " has a negative weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > kSimplexTolerance) {
            fail(ErrorKind::domain, "weight vector " + std::to_string(k + 1) + " sums to " + std::to_string(sum));
        }
        out.xi_star = std::max(out.xi_star, v.xi_star);
    }

    out.weights.resize(n);
    std::vector<double> column(vectors.size());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < vectors.size(); ++k) column[k] = vectors[k].weights[j];
        if (method == Aggregation::arithmetic_mean) {
            out.weights[j] = order_free_mean(column);
        } else {
            const bool any_zero = std::any_of(column.begin(), column.end(), [](double w) { return w == 0.0; });
            if (any_zero) {
                out.weights[j] = 0.0;
            } else {
                for (double& w : column) w = std::log(w);
                out.weights[j] = std::exp(order_free_mean(column));
            }
        }
    }
    if (method == Aggregation::geometric_mean) {
        const double total = sum_sorted(out.weights);
        if (total <= 0.0) fail(ErrorKind::domain, "geometric mean is zero for every criterion");
        for (double& w : out.weights) w /= total;
    }
    return out;
}

std::vector<int> rank(std::span<const double> weights) {
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    std::vector<int> ranks(weights.size());
    for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<int>(r + 1);
    return ranks;
}

Hierarchy compute_global_weights(const LabeledWeights& dimensions, std::span<const LabeledWeights> locals) {
    const std::size_t n_dims = dimensions.weights.weights.size();
    if (dimensions.codes.size() != n_dims) fail(ErrorKind::shape, "dimension labels do not match dimension weights");
    if (locals.size() != n_dims) {
        fail(ErrorKind::shape, std::to_string(n_dims) + " dimensions but " + std::to_string(locals.size()) +
                                   " local weight sets");
    }
    auto check_simplex = [](const WeightVector& v, const std::string& what) {
        double sum = 0.0;
        for (double w : v.weights) {
            if (!(w >= 0.0)) fail(ErrorKind::domain, what + " has a negative weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > kSimplexTolerance) fail(ErrorKind::domain, what + " sums to " + std::to_string(sum));
    };
    check_simplex(dimensions.weights, "dimension weights");

    Hierarchy h;
    const auto dim_ranks = rank(dimensions.weights.weights);
    std::vector<double> all_globals;
    for (std::size_t d = 0; d < n_dims; ++d) {
        const auto& local = locals[d];
        if (local.codes.size() != local.weights.weights.size() || local.codes.empty()) {
            fail(ErrorKind::shape, "local weights for dimension '" + dimensions.codes[d] + "' do not match labels");
        }
        check_simplex(local.weights, "local weights of '" + dimensions.codes[d] + "'");

        HierarchyDimension dim;
        dim.code = dimensions.codes[d];
        dim.name = d < dimensions.names.size() ? dimensions.names[d] : std::string{};
        dim.weight = dimensions.weights.weights[d];
        dim.rank = dim_ranks[d];
        const auto local_ranks = rank(local.weights.weights);
        for (std::size_t a = 0; a < local.codes.size(); ++a) {
            HierarchyAttribute attr;
            attr.code = local.codes[a];
            attr.name = a < local.names.size() ? local.names[a] : std::string{};
            attr.local_weight = local.weights.weights[a];
            attr.global_weight = dim.weight * attr.local_weight;
            attr.local_rank = local_ranks[a];
            all_globals.push_back(attr.global_weight);
            dim.attributes.push_back(std::move(attr));
        }
        h.dimensions.push_back(std::move(dim));
    }

    const auto global_ranks = rank(all_globals);
    std::size_t k = 0;
    for (auto& dim : h.dimensions) {
        for (auto& attr : dim.attributes) attr.global_rank = global_ranks[k++];
    }
    return h;
}

std::string format_hierarchy(const Hierarchy& h) {
    std::size_t dim_width = 9;
    for (const auto& d : h.dimensions) {
        const auto label = d.name.empty() ? d.code : d.name + " (" + d.code + ")";
        dim_width = std::max(dim_width, label.size());
    }
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(w, s.size()), ' ');
        return s;
    };
    std::ostringstream out;
    out << pad("Dimension", dim_width) << "  Weight  Ranking  Attribute  Local weight  Local Ranking  "
        << "Global weight  Global Ranking\n";
    for (const auto& d : h.dimensions) {
        const auto label = d.name.empty() ? d.code : d.name + " (" + d.code + ")";
        bool first = true;
        for (const auto& a : d.attributes) {
            if (first) {
                out << pad(label, dim_width) << "  " << pad(io::format_fixed(d.weight, 3), 6) << "  "
                    << pad(std::to_string(d.rank), 7) << "  ";
            } else {
                out << pad("", dim_width) << "  " << pad("", 6) << "  " << pad("", 7) << "  ";
            }
            out << pad(a.code, 9) << "  " << pad(io::format_fixed(a.local_weight, 3), 12) << "  "
                << pad(std::to_string(a.local_rank), 13) << "  " << pad(io::format_fixed(a.global_weight, 3), 13)
                << "  " << a.global_rank << '\n';
            first = false;
        }
    }
    return out.str();
}

nlohmann::json to_json(const Hierarchy& h) {
    nlohmann::json dims = nlohmann::json::array();
    for (const auto& d : h.dimensions) {
        nlohmann::json attrs = nlohmann::json::array();
        for (const auto& a : d.attributes) {
            attrs.push_back({{"code", a.code},
                             {"name", a.name},
                             {"local_weight", a.local_weight},
                             {"local_rank", a.local_rank},
                             {"global_weight", a.global_weight},
                             {"global_rank", a.global_rank}});
        }
        dims.push_back({{"code", d.code},
                        {"name", d.name},
                        {"weight", d.weight},
                        {"rank", d.rank},
                        {"attributes", std::move(attrs)}});
    }
    return {{"dimensions", std::move(dims)}};
}

}  // namespace exwa::group
