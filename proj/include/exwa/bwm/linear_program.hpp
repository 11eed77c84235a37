#pragma once

#include "exwa/error.hpp"

#include <cstddef>
#include <vector>

namespace exwa::bwm {

inline constexpr double kFeasibilityTolerance = 1e-9;

enum class Sense { less_equal, greater_equal, equal };

struct LinearConstraint {
    std::vector<double> coefficients;
    Sense sense = Sense::less_equal;
    double rhs = 0.0;
};

/// minimize objective . x  subject to constraints and x >= lower_bounds.
/// Variables are unbounded above. An empty `lower_bounds` means all zero.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<LinearConstraint> constraints;
    std::vector<double> lower_bounds;

    std::size_t variable_count() const noexcept { return objective.size(); }
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
    /// A distinct optimal vertex (or optimal ray) was found next to the returned one.
    bool alternative_optima = false;
    std::size_t iterations = 0;
};

/// Thrown when phase one ends with positive infeasibility. The certificate u
/// (one multiplier per constraint, original orientation) satisfies
/// u.A <= 0 columnwise, u_i <= 0 on <= rows, u_i >= 0 on >= rows, and
/// u.b' > 0 where b' is the rhs after shifting by the lower bounds.
class InfeasibleProgram : public Error {
public:
    InfeasibleProgram(std::vector<double> certificate, double infeasibility);
    const std::vector<double>& certificate() const noexcept { return certificate_; }
    double infeasibility() const noexcept { return infeasibility_; }

private:
    std::vector<double> certificate_;
    double infeasibility_;
};

/// Thrown when the objective decreases without bound along `ray` (in x space).
class UnboundedProgram : public Error {
public:
    explicit UnboundedProgram(std::vector<double> ray);
    const std::vector<double>& ray() const noexcept { return ray_; }

private:
    std::vector<double> ray_;
};

/// Dense two-phase primal simplex with Bland's rule. Intended for small
/// problems (tens of variables); no sparsity or scaling tricks.
LpSolution lp_minimize(const LinearProgram& lp);

/// Largest violation of any constraint or bound at `x` (0 when feasible).
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace exwa::bwm
