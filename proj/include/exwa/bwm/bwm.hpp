#pragma once

// Best-Worst Method for one decision-maker: the minimax weight model,
// linearised by splitting each |.| <= xi into two inequalities.

#include "exwa/bwm/linear_program.hpp"
#include "exwa/execution.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace exwa::bwm {

inline constexpr int kMinComparison = 1;
inline constexpr int kMaxComparison = 9;

struct BwmInstance {
    std::vector<std::string> criteria;
    std::size_t best = 0;
    std::size_t worst = 0;
    std::vector<int> best_to_others;   // m_Bj
    std::vector<int> others_to_worst;  // m_jW
    std::string decision_maker;

    std::size_t size() const noexcept { return criteria.size(); }
    int best_to_worst() const { return best_to_others[worst]; }
};

struct WeightVector {
    std::vector<double> weights;
    double xi_star = 0.0;
};

struct BwmSolution {
    WeightVector result;
    bool multiple_optima = false;
};

/// Returns `raw` unchanged when every structural rule holds.
BwmInstance validate_instance(BwmInstance raw);

/// The linear model emitted for an instance: variables w_0..w_{n-1}, xi.
LinearProgram build_program(const BwmInstance& inst);

BwmSolution solve_weights(const BwmInstance& inst);

/// max_j max(|w_B - m_Bj w_j|, |w_j - m_jW w_W|) for given weights.
double max_deviation(const BwmInstance& inst, std::span<const double> weights);

/// True when m_Bj * m_jW == m_BW for every j.
bool is_fully_consistent(const BwmInstance& inst);

using ConsistencyIndexTable = std::array<double, 9>;

/// Consistency index by m_BW = 1..9, as tabulated in the BWM literature.
inline constexpr ConsistencyIndexTable kDefaultConsistencyIndex{0.00, 0.44, 1.00, 1.63, 2.30,
                                                                 3.00, 3.73, 4.47, 5.23};

double consistency_ratio(double xi_star, int best_to_worst,
                         const ConsistencyIndexTable& table = kDefaultConsistencyIndex);

/// Solves every instance independently; results are in input order and do
/// not depend on the execution mode.
std::vector<BwmSolution> solve_batch(std::span<const BwmInstance> instances, Execution exec = Execution::parallel);

/// Document fields: criteria[], best, worst (label or index),
/// best_to_others[], others_to_worst[]; optional names[], decision_maker.
BwmInstance instance_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const BwmInstance& inst);

}  // namespace exwa::bwm
