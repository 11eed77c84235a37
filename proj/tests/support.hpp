#pragma once

// Independent oracles and random generators shared by the unit tests and the
// acceptance runner. Nothing here calls into the solver code it checks.

#include "exwa/bwm/bwm.hpp"
#include "exwa/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

namespace exwa::testing {

inline std::string source_path(const std::string& rel) { return std::string(EXWA_SOURCE_DIR) + "/" + rel; }

// ---- BWM ----------------------------------------------------------------

/// max_j max(|w_B - m_Bj w_j|, |w_j - m_jW w_W|), written out independently.
inline double minimax_value(const bwm::BwmInstance& inst, const std::vector<double>& w) {
    double worst = 0.0;
    for (std::size_t j = 0; j < inst.size(); ++j) {
        worst = std::max(worst, std::abs(w[inst.best] - inst.best_to_others[j] * w[j]));
        worst = std::max(worst, std::abs(w[j] - inst.others_to_worst[j] * w[inst.worst]));
    }
    return worst;
}

struct OracleResult {
    std::vector<double> w;
    double xi = std::numeric_limits<double>::infinity();
};

/// With w_B = b and w_W = c fixed, each other weight is confined to an
/// interval that depends only on xi, and the sum constraint becomes
/// sum(lo) <= 1 - b - c <= sum(hi). Fills `w` when feasible.
inline bool feasible_at(const bwm::BwmInstance& inst, double b, double c, double xi, std::vector<double>* w = nullptr) {
    const std::size_t n = inst.size();
    const double m_bw = inst.best_to_others[inst.worst];
    if (std::abs(b - m_bw * c) > xi) return false;
    if (std::abs(b - inst.others_to_worst[inst.best] * c) > xi) return false;
    const double rest = 1.0 - b - c;
    double sum_lo = 0.0;
    double sum_hi = 0.0;
    std::vector<double> lo(n, 0.0);
    std::vector<double> hi(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == inst.best || j == inst.worst) continue;
        lo[j] = std::max({0.0, (b - xi) / inst.best_to_others[j], inst.others_to_worst[j] * c - xi});
        hi[j] = std::min((b + xi) / inst.best_to_others[j], inst.others_to_worst[j] * c + xi);
        if (lo[j] > hi[j]) return false;
        sum_lo += lo[j];
        sum_hi += hi[j];
    }
    if (sum_lo > rest || rest > sum_hi) return false;
    if (w != nullptr) {
        w->assign(n, 0.0);
        const double t = sum_hi > sum_lo ? (rest - sum_lo) / (sum_hi - sum_lo) : 0.0;
        for (std::size_t j = 0; j < n; ++j) (*w)[j] = lo[j] + t * (hi[j] - lo[j]);
        (*w)[inst.best] = b;
        (*w)[inst.worst] = c;
    }
    return true;
}

/// Smallest feasible xi for fixed (w_B, w_W), by bisection.
inline double min_xi_at(const bwm::BwmInstance& inst, double b, double c) {
    double lo = 0.0;
    double hi = 10.0;
    if (!feasible_at(inst, b, c, hi)) return std::numeric_limits<double>::infinity();
    if (feasible_at(inst, b, c, 0.0)) return 0.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible_at(inst, b, c, mid) ? hi : lo) = mid;
    }
    return hi;
}

/// Golden-section minimum of a convex function on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double* arg) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - r * (b - a);
    double x2 = a + r * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 90 && b - a > 1e-13; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    *arg = f1 <= f2 ? x1 : x2;
    return std::min(f1, f2);
}

/// Grid-search minimax oracle over (w_B, w_W): a full grid at `step` on
/// {b, c >= 0, b + c <= 1}, refined by nested golden-section search (the
/// reduced objective is convex, and so is its partial minimum over c). The
/// remaining weights follow from the interval construction in feasible_at.
inline OracleResult grid_oracle(const bwm::BwmInstance& inst, double step = 1e-3) {
    OracleResult best;
    double best_b = 0.0;
    double best_c = 0.0;
    auto consider = [&](double b, double c) {
        if (b < 0.0 || c < 0.0 || b + c > 1.0) return;
        // A point that is infeasible at the incumbent value cannot improve on it.
        if (std::isfinite(best.xi) && !feasible_at(inst, b, c, best.xi)) return;
        const double v = min_xi_at(inst, b, c);
        if (v < best.xi) {
            best.xi = v;
            best_b = b;
            best_c = c;
        }
    };
    const int steps = static_cast<int>(std::lround(1.0 / step));
    for (int i = 0; i <= steps; ++i) {
        for (int k = 0; i + k <= steps; ++k) consider(i * step, k * step);
    }

    auto inner = [&](double b, double* c_arg) {
        return golden_min([&](double c) { return min_xi_at(inst, b, c); }, 0.0, 1.0 - b, c_arg);
    };
    double b_arg = 0.0;
    golden_min(
        [&](double b) {
            double c = 0.0;
            return inner(b, &c);
        },
        0.0, 1.0, &b_arg);
    double c_arg = 0.0;
    inner(b_arg, &c_arg);
    consider(b_arg, c_arg);

    feasible_at(inst, best_b, best_c, best.xi, &best.w);
    return best;
}

/// Fully consistent instance: pick m_BW and weights so that
/// m_Bj * m_jW = m_BW for every j.
inline bwm::BwmInstance random_consistent_instance(Rng& rng, std::size_t n) {
    // m_BW with enough divisors to vary the middle criteria.
    static const int kChoices[] = {2, 3, 4, 6, 8, 9};
    const int m_bw = kChoices[rng.index(std::size(kChoices))];
    std::vector<int> divisors;
    for (int d = 1; d <= m_bw; ++d) {
        if (m_bw % d == 0) divisors.push_back(d);
    }
    bwm::BwmInstance inst;
    inst.best = rng.index(n);
    do {
        inst.worst = rng.index(n);
    } while (inst.worst == inst.best);
    inst.best_to_others.assign(n, 1);
    inst.others_to_worst.assign(n, 1);
    for (std::size_t j = 0; j < n; ++j) {
        inst.criteria.push_back("C" + std::to_string(j + 1));
        int mb = 1;
        if (j == inst.best) {
            mb = 1;
        } else if (j == inst.worst) {
            mb = m_bw;
        } else {
            mb = divisors[rng.index(divisors.size())];
        }
        inst.best_to_others[j] = mb;
        inst.others_to_worst[j] = m_bw / mb;
    }
    return inst;
}

/// Random valid instance: m_BW drawn from 2..9, other entries from 1..m_BW.
inline bwm::BwmInstance random_valid_instance(Rng& rng, std::size_t n) {
    bwm::BwmInstance inst;
    inst.best = rng.index(n);
    do {
        inst.worst = rng.index(n);
    } while (inst.worst == inst.best);
    const int m_bw = 2 + static_cast<int>(rng.index(8));
    inst.best_to_others.assign(n, 1);
    inst.others_to_worst.assign(n, 1);
    for (std::size_t j = 0; j < n; ++j) {
        inst.criteria.push_back("C" + std::to_string(j + 1));
        if (j == inst.best || j == inst.worst) continue;
        inst.best_to_others[j] = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(m_bw)));
        inst.others_to_worst[j] = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(m_bw)));
    }
    inst.best_to_others[inst.worst] = m_bw;
    inst.others_to_worst[inst.best] = m_bw;
    return inst;
}

// ---- CVI ----------------------------------------------------------------

struct CountOracle {
    std::vector<int> agreement;
    int universal = 0;
};

inline CountOracle count_relevant(const std::vector<std::vector<int>>& grid) {
    CountOracle out;
    for (const auto& row : grid) {
        int c = 0;
        for (int r : row) c += (r == 3 || r == 4) ? 1 : 0;
        out.agreement.push_back(c);
        if (c == static_cast<int>(row.size())) ++out.universal;
    }
    return out;
}

}  // namespace exwa::testing
