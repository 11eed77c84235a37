#include "exwa/bwm/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace exwa::bwm {

namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr double kCostTolerance = 1e-11;
constexpr std::size_t kMaxIterations = 100000;

enum class ColumnKind { structural, slack, artificial };

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

struct Simplex {
    Tableau t;
    std::vector<std::size_t> basis;
    std::vector<ColumnKind> kinds;
    std::vector<bool> active_row;
    std::size_t iterations = 0;

    double reduced_cost(const std::vector<double>& cost, std::size_t j) const {
        double r = cost[j];
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (!active_row[i]) continue;
            r -= cost[basis[i]] * t.at(i, j);
        }
        return r;
    }

    double objective(const std::vector<double>& cost) const {
        double z = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (active_row[i]) z += cost[basis[i]] * t.rhs(i);
        }
        return z;
    }

    bool is_basic(std::size_t j) const {
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (active_row[i] && basis[i] == j) return true;
        }
        return false;
    }

    /// Bland ratio test: minimum ratio, ties to the smallest basic index.
    /// Returns rows() when the column has no positive entry.
    std::size_t leaving_row(std::size_t col) const {
        std::size_t best = t.rows();
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (!active_row[i]) continue;
            const double a = t.at(i, col);
            if (a <= kPivotTolerance) continue;
            const double ratio = t.rhs(i) / a;
            if (ratio < best_ratio - 1e-15 ||
                (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[best])) {
                best_ratio = ratio;
                best = i;
            }
        }
        return best;
    }

    enum class Outcome { optimal, unbounded };

    /// Runs simplex iterations with Bland's entering rule. Columns for which
    /// `allowed` is false never enter.
    Outcome run(const std::vector<double>& cost, const std::vector<bool>& allowed, std::size_t& unbounded_col) {
        while (true) {
            if (++iterations > kMaxIterations) {
                fail(ErrorKind::solver_failure,
                     "simplex exceeded " + std::to_string(kMaxIterations) + " iterations");
            }
            std::size_t entering = t.cols();
            for (std::size_t j = 0; j < t.cols(); ++j) {
                if (!allowed[j] || is_basic(j)) continue;
                if (reduced_cost(cost, j) < -kCostTolerance) {
                    entering = j;
                    break;
                }
            }
            if (entering == t.cols()) return Outcome::optimal;
            const std::size_t row = leaving_row(entering);
            if (row == t.rows()) {
                unbounded_col = entering;
                return Outcome::unbounded;
            }
            t.pivot(row, entering);
            basis[row] = entering;
        }
    }
};

}  // namespace

InfeasibleProgram::InfeasibleProgram(std::vector<double> certificate, double infeasibility)
    : Error(ErrorKind::infeasible,
            "linear program is infeasible (phase-one residual " + std::to_string(infeasibility) + ")"),
      certificate_(std::move(certificate)),
      infeasibility_(infeasibility) {}

UnboundedProgram::UnboundedProgram(std::vector<double> ray)
    : Error(ErrorKind::unbounded, "linear program is unbounded below"), ray_(std::move(ray)) {}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double lb = lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j];
        worst = std::max(worst, lb - x[j]);
    }
    for (const auto& con : lp.constraints) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) lhs += con.coefficients[j] * x[j];
        switch (con.sense) {
            case Sense::less_equal: worst = std::max(worst, lhs - con.rhs); break;
            case Sense::greater_equal: worst = std::max(worst, con.rhs - lhs); break;
            case Sense::equal: worst = std::max(worst, std::abs(lhs - con.rhs)); break;
        }
    }
    return worst;
}

LpSolution lp_minimize(const LinearProgram& lp) {
    const std::size_t n = lp.variable_count();
    const std::size_t m = lp.constraints.size();
    if (n == 0) fail(ErrorKind::shape, "linear program has no variables");
    if (!lp.lower_bounds.empty() && lp.lower_bounds.size() != n) {
        fail(ErrorKind::shape, "lower bound count does not match variable count");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (lp.constraints[i].coefficients.size() != n) {
            fail(ErrorKind::shape, "constraint " + std::to_string(i) + " has " +
                                       std::to_string(lp.constraints[i].coefficients.size()) +
                                       " coefficients, expected " + std::to_string(n));
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(lp.objective[j])) fail(ErrorKind::domain, "non-finite objective coefficient");
        if (!lp.lower_bounds.empty() && !std::isfinite(lp.lower_bounds[j])) {
            fail(ErrorKind::domain, "lower bounds must be finite");
        }
    }

    auto lower = [&](std::size_t j) { return lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j]; };

    // Shift x = lower + x', then flip rows so every rhs is nonnegative.
    std::vector<double> rhs(m);
    std::vector<double> sign(m, 1.0);
    std::vector<Sense> sense(m);
    std::size_t extra = 0;
    std::size_t artificial = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& con = lp.constraints[i];
        double b = con.rhs;
        for (std::size_t j = 0; j < n; ++j) b -= con.coefficients[j] * lower(j);
        sense[i] = con.sense;
        if (b < 0.0) {
            sign[i] = -1.0;
            b = -b;
            if (sense[i] == Sense::less_equal) sense[i] = Sense::greater_equal;
            else if (sense[i] == Sense::greater_equal) sense[i] = Sense::less_equal;
        }
        rhs[i] = b;
        if (sense[i] != Sense::equal) ++extra;
        if (sense[i] != Sense::less_equal) ++artificial;
    }

    const std::size_t cols = n + extra + artificial;
    Simplex s{Tableau(m, cols), std::vector<std::size_t>(m), std::vector<ColumnKind>(cols, ColumnKind::structural),
              std::vector<bool>(m, true)};
    std::vector<std::size_t> initial_column(m);
    {
        std::size_t next_extra = n;
        std::size_t next_art = n + extra;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) s.t.at(i, j) = sign[i] * lp.constraints[i].coefficients[j];
            s.t.rhs(i) = rhs[i];
            switch (sense[i]) {
                case Sense::less_equal:
                    s.kinds[next_extra] = ColumnKind::slack;
                    s.t.at(i, next_extra) = 1.0;
                    s.basis[i] = initial_column[i] = next_extra++;
                    break;
                case Sense::greater_equal:
                    s.kinds[next_extra] = ColumnKind::slack;
                    s.t.at(i, next_extra++) = -1.0;
                    [[fallthrough]];
                case Sense::equal:
                    s.kinds[next_art] = ColumnKind::artificial;
                    s.t.at(i, next_art) = 1.0;
                    s.basis[i] = initial_column[i] = next_art++;
                    break;
            }
        }
    }

    std::size_t unbounded_col = 0;

    // Phase one: minimize the sum of artificials.
    if (artificial > 0) {
        std::vector<double> cost1(cols, 0.0);
        for (std::size_t j = 0; j < cols; ++j) {
            if (s.kinds[j] == ColumnKind::artificial) cost1[j] = 1.0;
        }
        std::vector<bool> allowed(cols, true);
        s.run(cost1, allowed, unbounded_col);  // bounded below by zero

        const double infeasibility = s.objective(cost1);
        double scale = 1.0;
        for (double b : rhs) scale = std::max(scale, std::abs(b));
        if (infeasibility > kFeasibilityTolerance * scale) {
            std::vector<double> certificate(m);
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t j = initial_column[i];
                const double y = cost1[j] - s.reduced_cost(cost1, j);
                certificate[i] = sign[i] * y;
            }
            throw InfeasibleProgram(std::move(certificate), infeasibility);
        }

        // Drive remaining artificials out of the basis; drop redundant rows.
        for (std::size_t i = 0; i < m; ++i) {
            if (s.kinds[s.basis[i]] != ColumnKind::artificial) continue;
            std::size_t col = cols;
            for (std::size_t j = 0; j < cols; ++j) {
                if (s.kinds[j] != ColumnKind::artificial && std::abs(s.t.at(i, j)) > kPivotTolerance) {
                    col = j;
                    break;
                }
            }
            if (col == cols) {
                s.active_row[i] = false;
            } else {
                s.t.pivot(i, col);
                s.basis[i] = col;
            }
        }
    }

    // Phase two.
    std::vector<double> cost2(cols, 0.0);
    std::copy(lp.objective.begin(), lp.objective.end(), cost2.begin());
    std::vector<bool> allowed(cols, true);
    for (std::size_t j = 0; j < cols; ++j) {
        if (s.kinds[j] == ColumnKind::artificial) allowed[j] = false;
    }

    auto structural_values = [&] {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = lower(j);
        for (std::size_t i = 0; i < m; ++i) {
            if (s.active_row[i] && s.basis[i] < n) x[s.basis[i]] += s.t.rhs(i);
        }
        return x;
    };

    if (s.run(cost2, allowed, unbounded_col) == Simplex::Outcome::unbounded) {
        std::vector<double> ray(n, 0.0);
        if (unbounded_col < n) ray[unbounded_col] = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (s.active_row[i] && s.basis[i] < n) ray[s.basis[i]] = -s.t.at(i, unbounded_col);
        }
        throw UnboundedProgram(std::move(ray));
    }

    LpSolution out;
    out.x = structural_values();
    out.iterations = s.iterations;
    out.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.objective += lp.objective[j] * out.x[j];

    // Look for a distinct optimal vertex or ray adjacent to this basis.
    for (std::size_t j = 0; j < cols && !out.alternative_optima; ++j) {
        if (!allowed[j] || s.is_basic(j)) continue;
        if (std::abs(s.reduced_cost(cost2, j)) > kCostTolerance) continue;
        const std::size_t row = s.leaving_row(j);
        double step = row == m ? 1.0 : s.t.rhs(row) / s.t.at(row, j);
        if (step <= kFeasibilityTolerance) continue;
        double moved = j < n ? step : 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (s.active_row[i] && s.basis[i] < n) moved = std::max(moved, std::abs(step * s.t.at(i, j)));
        }
        if (moved > kFeasibilityTolerance) out.alternative_optima = true;
    }

    if (max_violation(lp, out.x) > 1e-7) {
        fail(ErrorKind::solver_failure, "simplex returned a point violating constraints by " +
                                            std::to_string(max_violation(lp, out.x)));
    }
    return out;
}

}  // namespace exwa::bwm
