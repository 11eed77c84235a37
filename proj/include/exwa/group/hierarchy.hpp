#pragma once

// Pools decision-makers' weight vectors and composes the two-level
// dimension -> attribute hierarchy (global = dimension weight x local weight).

#include "exwa/bwm/bwm.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace exwa::group {

using bwm::WeightVector;

enum class Aggregation { arithmetic_mean, geometric_mean };

Aggregation parse_aggregation(const std::string& name);
std::string to_string(Aggregation method);

struct GroupWeightSet {
    std::vector<std::string> criteria;
    std::vector<WeightVector> per_dm;
    WeightVector aggregate;
    Aggregation method = Aggregation::arithmetic_mean;
};

/// Componentwise pooling. The aggregate xi* is the largest per-DM xi*.
/// Results do not depend on the order of `vectors`.
WeightVector aggregate_weights(std::span<const WeightVector> vectors, Aggregation method);

/// Rank 1 = largest; ties keep input order.
std::vector<int> rank(std::span<const double> weights);

struct LabeledWeights {
    std::vector<std::string> codes;
    std::vector<std::string> names;  // optional, parallel to codes
    WeightVector weights;
};

struct HierarchyAttribute {
    std::string code;
    std::string name;
    double local_weight = 0.0;
    double global_weight = 0.0;
    int local_rank = 0;
    int global_rank = 0;
};

struct HierarchyDimension {
    std::string code;
    std::string name;
    double weight = 0.0;
    int rank = 0;
    std::vector<HierarchyAttribute> attributes;
};

struct Hierarchy {
    std::vector<HierarchyDimension> dimensions;
};

/// `locals[d]` holds the attribute weights under dimension d.
Hierarchy compute_global_weights(const LabeledWeights& dimensions, std::span<const LabeledWeights> locals);

/// Fixed-width table: Dimension, Weight, Ranking, Attribute, Local weight,
/// Local Ranking, Global weight, Global Ranking (3 dp).
std::string format_hierarchy(const Hierarchy& h);
nlohmann::json to_json(const Hierarchy& h);

}  // namespace exwa::group
