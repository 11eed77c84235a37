#include <catch_amalgamated.hpp>

#include "exwa/bwm/linear_program.hpp"
#include "exwa/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

using namespace exwa;
using namespace exwa::bwm;
using Catch::Matchers::WithinAbs;

namespace {

LinearConstraint row(std::vector<double> a, Sense s, double b) { return {std::move(a), s, b}; }

/// Brute-force vertex enumeration: every choice of n tight constraints
/// (rows or bounds) that yields a feasible point. Returns +inf if none.
double vertex_oracle(const LinearProgram& lp) {
    const std::size_t n = lp.variable_count();
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const auto& c : lp.constraints) {
        rows.push_back(c.coefficients);
        rhs.push_back(c.rhs);
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        rows.push_back(e);
        rhs.push_back(lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j]);
    }
    const std::size_t m = rows.size();
    double best = std::numeric_limits<double>::infinity();
    // iterate over n-subsets of m
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
    do {
        Eigen::MatrixXd a(n, n);
        Eigen::VectorXd b(n);
        std::size_t k = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!mask[i]) continue;
            for (std::size_t j = 0; j < n; ++j) a(k, j) = rows[i][j];
            b(k) = rhs[i];
            ++k;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (lu.rank() < static_cast<Eigen::Index>(n)) continue;
        const Eigen::VectorXd x = lu.solve(b);
        std::vector<double> xv(x.data(), x.data() + n);
        if (max_violation(lp, xv) > 1e-9) continue;
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) z += lp.objective[j] * xv[j];
        best = std::min(best, z);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return best;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TEST_CASE("single active bound") {
    LinearProgram lp{{1.0}, {row({1.0}, Sense::greater_equal, 3.0)}, {}};
    const auto s = lp_minimize(lp);
    CHECK_THAT(s.x[0], WithinAbs(3.0, 1e-12));
    CHECK_THAT(s.objective, WithinAbs(3.0, 1e-12));
    CHECK_FALSE(s.alternative_optima);
}

TEST_CASE("equality forces the objective") {
    LinearProgram lp{{1.0, 1.0}, {row({1.0, 1.0}, Sense::equal, 1.0)}, {}};
    const auto s = lp_minimize(lp);
    CHECK_THAT(s.objective, WithinAbs(1.0, 1e-12));
    CHECK(max_violation(lp, s.x) <= 1e-9);
    // every split of the unit sum is optimal
    CHECK(s.alternative_optima);
}

TEST_CASE("lower bounds shift the feasible region") {
    LinearProgram lp{{2.0, 1.0}, {row({1.0, 1.0}, Sense::less_equal, 10.0)}, {-1.0, 4.0}};
    const auto s = lp_minimize(lp);
    CHECK_THAT(s.x[0], WithinAbs(-1.0, 1e-12));
    CHECK_THAT(s.x[1], WithinAbs(4.0, 1e-12));
    CHECK_THAT(s.objective, WithinAbs(2.0, 1e-12));
}

TEST_CASE("textbook maximisation as minimisation") {
    // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
    LinearProgram lp{{-3.0, -5.0},
                     {row({1.0, 0.0}, Sense::less_equal, 4.0), row({0.0, 2.0}, Sense::less_equal, 12.0),
                      row({3.0, 2.0}, Sense::less_equal, 18.0)},
                     {}};
    const auto s = lp_minimize(lp);
    CHECK_THAT(s.x[0], WithinAbs(2.0, 1e-9));
    CHECK_THAT(s.x[1], WithinAbs(6.0, 1e-9));
    CHECK_THAT(s.objective, WithinAbs(-36.0, 1e-9));
}

TEST_CASE("infeasible program yields a valid certificate") {
    // x + y <= 1 and x + y >= 3
    LinearProgram lp{{1.0, 1.0},
                     {row({1.0, 1.0}, Sense::less_equal, 1.0), row({1.0, 1.0}, Sense::greater_equal, 3.0)},
                     {}};
    try {
        lp_minimize(lp);
        FAIL("expected infeasibility");
    } catch (const InfeasibleProgram& e) {
        CHECK(e.kind() == ErrorKind::infeasible);
        CHECK(e.infeasibility() > 0.0);
        const auto& u = e.certificate();
        REQUIRE(u.size() == 2);
        CHECK(u[0] <= 1e-12);
        CHECK(u[1] >= -1e-12);
        CHECK(u[0] + u[1] <= 1e-9);  // both columns are (1, 1)
        CHECK(u[0] * 1.0 + u[1] * 3.0 > 1e-9);
    }
}

TEST_CASE("unbounded program yields an improving ray") {
    // minimize -x - y with x - y <= 1
    LinearProgram lp{{-1.0, -1.0}, {row({1.0, -1.0}, Sense::less_equal, 1.0)}, {}};
    try {
        lp_minimize(lp);
        FAIL("expected unboundedness");
    } catch (const UnboundedProgram& e) {
        CHECK(e.kind() == ErrorKind::unbounded);
        const auto& d = e.ray();
        REQUIRE(d.size() == 2);
        CHECK(dot(lp.objective, d) < -1e-12);
        CHECK(d[0] >= -1e-12);
        CHECK(d[1] >= -1e-12);
        CHECK(d[0] - d[1] <= 1e-12);
    }
}

TEST_CASE("max_violation measures rows and bounds") {
    LinearProgram lp{{0.0, 0.0},
                     {row({1.0, 1.0}, Sense::equal, 1.0), row({1.0, 0.0}, Sense::less_equal, 0.5)},
                     {}};
    CHECK(max_violation(lp, {0.5, 0.5}) == 0.0);
    CHECK_THAT(max_violation(lp, {0.7, 0.3}), WithinAbs(0.2, 1e-15));
    CHECK_THAT(max_violation(lp, {-0.25, 1.25}), WithinAbs(0.25, 1e-15));
}

TEST_CASE("random bounded programs match vertex enumeration") {
    Rng rng(2024);
    int solved = 0;
    int infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.index(2);
        const std::size_t m = 1 + rng.index(4);
        LinearProgram lp;
        for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(rng.uniform(-1.0, 1.0));
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> a;
            for (std::size_t j = 0; j < n; ++j) a.push_back(static_cast<double>(rng.index(7)) - 3.0);
            const auto s = static_cast<Sense>(rng.index(3));
            lp.constraints.push_back(row(a, s, static_cast<double>(rng.index(9)) - 2.0));
        }
        // a box keeps every instance bounded
        std::vector<double> all(n, 1.0);
        lp.constraints.push_back(row(all, Sense::less_equal, 5.0));

        const double oracle = vertex_oracle(lp);
        if (!std::isfinite(oracle)) {
            CHECK_THROWS_AS(lp_minimize(lp), InfeasibleProgram);
            ++infeasible;
            continue;
        }
        const auto s = lp_minimize(lp);
        INFO("trial " << trial);
        CHECK(max_violation(lp, s.x) <= 1e-9);
        CHECK_THAT(s.objective, WithinAbs(oracle, 1e-9));
        CHECK_THAT(dot(lp.objective, s.x), WithinAbs(s.objective, 1e-9));
        ++solved;
    }
    CHECK(solved > 50);
    CHECK(infeasible > 5);
}
