#include "exwa/bwm/bwm.hpp"

#include "exwa/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace exwa::bwm {

namespace {

std::string who(const BwmInstance& inst) {
    return inst.decision_maker.empty() ? std::string("instance") : "decision-maker '" + inst.decision_maker + "'";
}

}  // namespace

BwmInstance validate_instance(BwmInstance raw) {
    const std::size_t n = raw.criteria.size();
    if (n < 2) fail(ErrorKind::shape, who(raw) + ": at least two criteria required");
    if (raw.best_to_others.size() != n || raw.others_to_worst.size() != n) {
        fail(ErrorKind::shape, who(raw) + ": comparison vectors must have " + std::to_string(n) + " entries");
    }
    std::set<std::string> seen(raw.criteria.begin(), raw.criteria.end());
    if (seen.size() != n) fail(ErrorKind::shape, who(raw) + ": criterion labels must be unique");
    if (raw.best >= n || raw.worst >= n) fail(ErrorKind::shape, who(raw) + ": best/worst index out of range");
    if (raw.best == raw.worst) {
        fail(ErrorKind::degenerate_instance, who(raw) + ": best and worst are both '" + raw.criteria[raw.best] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (int v : {raw.best_to_others[j], raw.others_to_worst[j]}) {
            if (v < kMinComparison || v > kMaxComparison) {
                fail(ErrorKind::scale, who(raw) + ": comparison " + std::to_string(v) + " for '" + raw.criteria[j] +
                                           "' outside the 1..9 scale");
            }
        }
    }
    if (raw.best_to_others[raw.best] != 1) {
        fail(ErrorKind::self_comparison, who(raw) + ": best-to-best comparison must be 1");
    }
    if (raw.others_to_worst[raw.worst] != 1) {
        fail(ErrorKind::self_comparison, who(raw) + ": worst-to-worst comparison must be 1");
    }
    const int m_bw = raw.best_to_others[raw.worst];
    if (raw.others_to_worst[raw.best] != m_bw) {
        fail(ErrorKind::inconsistent_instance, who(raw) + ": best-to-worst is " + std::to_string(m_bw) +
                                                   " in best_to_others but " +
                                                   std::to_string(raw.others_to_worst[raw.best]) +
                                                   " in others_to_worst");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (raw.best_to_others[j] > m_bw || raw.others_to_worst[j] > m_bw) {
            fail(ErrorKind::inconsistent_instance,
                 who(raw) + ": comparison for '" + raw.criteria[j] + "' exceeds the best-to-worst value " +
                     std::to_string(m_bw));
        }
    }
    return raw;
}

LinearProgram build_program(const BwmInstance& inst) {
    const std::size_t n = inst.size();
    const std::size_t xi = n;
    LinearProgram lp;
    lp.objective.assign(n + 1, 0.0);
    lp.objective[xi] = 1.0;

    auto add_abs = [&](std::size_t a, std::size_t b, double factor) {
        // |w_a - factor * w_b| <= xi
        LinearConstraint up{std::vector<double>(n + 1, 0.0), Sense::less_equal, 0.0};
        up.coefficients[a] += 1.0;
        up.coefficients[b] -= factor;
        up.coefficients[xi] = -1.0;
        LinearConstraint down = up;
        for (std::size_t j = 0; j < n; ++j) down.coefficients[j] = -down.coefficients[j];
        lp.constraints.push_back(std::move(up));
        lp.constraints.push_back(std::move(down));
    };
    for (std::size_t j = 0; j < n; ++j) {
        if (j != inst.best) add_abs(inst.best, j, inst.best_to_others[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (j != inst.worst && j != inst.best) add_abs(j, inst.worst, inst.others_to_worst[j]);
    }
    LinearConstraint sum{std::vector<double>(n + 1, 1.0), Sense::equal, 1.0};
    sum.coefficients[xi] = 0.0;
    lp.constraints.push_back(std::move(sum));
    return lp;
}

double max_deviation(const BwmInstance& inst, std::span<const double> w) {
    double worst = 0.0;
    for (std::size_t j = 0; j < inst.size(); ++j) {
        worst = std::max(worst, std::abs(w[inst.best] - inst.best_to_others[j] * w[j]));
        worst = std::max(worst, std::abs(w[j] - inst.others_to_worst[j] * w[inst.worst]));
    }
    return worst;
}

bool is_fully_consistent(const BwmInstance& inst) {
    const int m_bw = inst.best_to_worst();
    for (std::size_t j = 0; j < inst.size(); ++j) {
        if (inst.best_to_others[j] * inst.others_to_worst[j] != m_bw) return false;
    }
    return true;
}

BwmSolution solve_weights(const BwmInstance& inst) {
    const std::size_t n = inst.size();
    LpSolution lp;
    try {
        lp = lp_minimize(build_program(inst));
    } catch (const Error& e) {
        fail(ErrorKind::solver_failure, who(inst) + ": " + e.what());
    }

    BwmSolution out;
    out.multiple_optima = lp.alternative_optima;
    out.result.weights.assign(lp.x.begin(), lp.x.begin() + static_cast<std::ptrdiff_t>(n));
    // Clean round-off so the simplex invariants hold exactly.
    double sum = 0.0;
    for (double& w : out.result.weights) {
        w = std::max(w, 0.0);
        sum += w;
    }
    for (double& w : out.result.weights) w /= sum;
    out.result.xi_star = std::max(lp.x[n], 0.0);

    const double deviation = max_deviation(inst, out.result.weights);
    if (std::abs(deviation - out.result.xi_star) > 1e-6) {
        fail(ErrorKind::solver_failure, who(inst) + ": optimal xi " + std::to_string(out.result.xi_star) +
                                            " disagrees with achieved deviation " + std::to_string(deviation));
    }
    return out;
}

double consistency_ratio(double xi_star, int best_to_worst, const ConsistencyIndexTable& table) {
    if (!(xi_star >= 0.0)) fail(ErrorKind::domain, "xi* must be nonnegative");
    if (best_to_worst < kMinComparison || best_to_worst > kMaxComparison) {
        fail(ErrorKind::scale, "best-to-worst comparison " + std::to_string(best_to_worst) + " outside 1..9");
    }
    if (xi_star == 0.0) return 0.0;
    const double ci = table[static_cast<std::size_t>(best_to_worst - 1)];
    if (ci <= 0.0) {
        fail(ErrorKind::inconsistency_impossible,
             "xi* = " + std::to_string(xi_star) + " > 0 with best-to-worst " + std::to_string(best_to_worst) +
                 ", whose consistency index is zero");
    }
    return xi_star / ci;
}

std::vector<BwmSolution> solve_batch(std::span<const BwmInstance> instances, Execution exec) {
    std::vector<BwmSolution> out(instances.size());
    const auto count = static_cast<std::ptrdiff_t>(instances.size());
    if (exec == Execution::serial) {
        for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = solve_weights(instances[i]);
        return out;
    }
    // Exceptions must not escape an OpenMP region; keep the first by index.
    std::vector<std::string> errors(instances.size());
    std::vector<ErrorKind> kinds(instances.size(), ErrorKind::solver_failure);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            out[i] = solve_weights(instances[i]);
        } catch (const Error& e) {
            errors[i] = e.what();
            kinds[i] = e.kind();
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) throw Error(kinds[i], errors[i]);
    }
    return out;
}

namespace {

std::size_t resolve_index(const nlohmann::json& v, const std::vector<std::string>& criteria, const char* field) {
    if (v.is_number_integer()) {
        const auto idx = v.get<long long>();
        if (idx < 0 || static_cast<std::size_t>(idx) >= criteria.size()) {
            fail(ErrorKind::schema, std::string(field) + " index " + std::to_string(idx) + " out of range");
        }
        return static_cast<std::size_t>(idx);
    }
    if (v.is_string()) {
        const auto label = v.get<std::string>();
        const auto it = std::find(criteria.begin(), criteria.end(), label);
        if (it == criteria.end()) fail(ErrorKind::schema, std::string(field) + " '" + label + "' is not a criterion");
        return static_cast<std::size_t>(it - criteria.begin());
    }
    fail(ErrorKind::schema, std::string(field) + " must be a criterion label or index");
}

std::vector<int> int_vector(const nlohmann::json& doc, const char* field) {
    if (!doc.contains(field) || !doc[field].is_array()) {
        fail(ErrorKind::schema, std::string("missing array field '") + field + "'");
    }
    std::vector<int> out;
    for (const auto& v : doc[field]) {
        if (!v.is_number_integer()) fail(ErrorKind::scale, std::string(field) + " entries must be integers 1..9");
        out.push_back(v.get<int>());
    }
    return out;
}

}  // namespace

BwmInstance instance_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) fail(ErrorKind::schema, "BWM document must be an object");
    if (!doc.contains("criteria") || !doc["criteria"].is_array()) {
        fail(ErrorKind::schema, "missing array field 'criteria'");
    }
    BwmInstance inst;
    for (const auto& c : doc["criteria"]) {
        if (!c.is_string()) fail(ErrorKind::schema, "criteria entries must be strings");
        inst.criteria.push_back(c.get<std::string>());
    }
    if (!doc.contains("best")) fail(ErrorKind::schema, "missing field 'best'");
    if (!doc.contains("worst")) fail(ErrorKind::schema, "missing field 'worst'");
    inst.best = resolve_index(doc["best"], inst.criteria, "best");
    inst.worst = resolve_index(doc["worst"], inst.criteria, "worst");
    inst.best_to_others = int_vector(doc, "best_to_others");
    inst.others_to_worst = int_vector(doc, "others_to_worst");
    if (doc.contains("decision_maker") && doc["decision_maker"].is_string()) {
        inst.decision_maker = doc["decision_maker"].get<std::string>();
    }
    return inst;
}

nlohmann::json to_json(const BwmInstance& inst) {
    nlohmann::json doc{{"criteria", inst.criteria},
                       {"best", inst.criteria.at(inst.best)},
                       {"worst", inst.criteria.at(inst.worst)},
                       {"best_to_others", inst.best_to_others},
                       {"others_to_worst", inst.others_to_worst}};
    if (!inst.decision_maker.empty()) doc["decision_maker"] = inst.decision_maker;
    return doc;
}

}  // namespace exwa::bwm
