#include "exwa/ml/linear.hpp"

#include "exwa/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace exwa::ml {

void LinearRegression::fit(const Matrix& X, std::span<const double> y) {
    if (X.rows() != y.size()) fail(ErrorKind::shape, "feature rows and targets differ in length");
    if (X.rows() == 0) fail(ErrorKind::too_small, "linear regression needs training rows");
    const auto n = static_cast<Eigen::Index>(X.rows());
    const auto p = static_cast<Eigen::Index>(X.cols());
    Eigen::MatrixXd design(n, p + 1);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) design(i, j) = X(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        design(i, p) = 1.0;
        target(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(target);
    coef_.assign(beta.data(), beta.data() + p);
    intercept_ = beta(p);
}

double LinearRegression::predict_row(std::span<const double> x) const {
    double f = intercept_;
    for (std::size_t j = 0; j < coef_.size(); ++j) f += coef_[j] * x[j];
    return f;
}

std::vector<double> LinearRegression::predict(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_row(X.row(r));
    return out;
}

LinearRegression LinearRegression::from_parameters(std::vector<double> coefficients, double intercept) {
    LinearRegression m;
    m.coef_ = std::move(coefficients);
    m.intercept_ = intercept;
    return m;
}

void LinearSvr::fit(const Matrix& X, std::span<const double> y, const SvrParams& params) {
    if (X.rows() != y.size()) fail(ErrorKind::shape, "feature rows and targets differ in length");
    if (X.rows() == 0) fail(ErrorKind::too_small, "SVR needs training rows");
    if (!(params.epsilon >= 0.0)) fail(ErrorKind::domain, "SVR epsilon must be nonnegative");

    const std::size_t n = X.rows();
    const std::size_t p = X.cols();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    y_mean_ = mean;
    y_scale_ = sd > 0.0 ? sd : 1.0;

    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = (y[i] - y_mean_) / y_scale_;

    std::vector<double> w(p, 0.0);
    double b = 0.0;
    std::vector<double> grad_w(p);

    const bool squared = params.loss == SvrLoss::squared_epsilon_insensitive;
    auto objective = [&](const std::vector<double>& ww, double bb) {
        double reg = 0.0;
        for (double v : ww) reg += v * v;
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double f = bb;
            for (std::size_t j = 0; j < p; ++j) f += ww[j] * X(i, j);
            const double excess = std::max(0.0, std::abs(z[i] - f) - params.epsilon);
            loss += squared ? excess * excess : excess;
        }
        return 0.5 * params.l2 * reg + loss / static_cast<double>(n);
    };

    w_ = w;
    b_ = b;
    double best = objective(w, b);
    loss_.assign(1, best);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        for (std::size_t j = 0; j < p; ++j) grad_w[j] = params.l2 * w[j];
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double f = b;
            for (std::size_t j = 0; j < p; ++j) f += w[j] * X(i, j);
            const double r = z[i] - f;
            if (std::abs(r) <= params.epsilon) continue;
            double s = r > 0.0 ? -1.0 : 1.0;  // d/df of |z - f|
            if (squared) s *= 2.0 * (std::abs(r) - params.epsilon);
            for (std::size_t j = 0; j < p; ++j) grad_w[j] += s * X(i, j) / static_cast<double>(n);
            grad_b += s / static_cast<double>(n);
        }
        const double step =
            squared ? params.learning_rate : params.learning_rate / std::sqrt(static_cast<double>(epoch) + 1.0);
        for (std::size_t j = 0; j < p; ++j) w[j] -= step * grad_w[j];
        b -= step * grad_b;

        const double obj = objective(w, b);
        if (!std::isfinite(obj)) fail(ErrorKind::divergence, "SVR objective diverged at epoch " + std::to_string(epoch));
        if (obj < best) {
            best = obj;
            w_ = w;
            b_ = b;
        }
        loss_.push_back(best);
    }
}

double LinearSvr::predict_row(std::span<const double> x) const {
    double f = b_;
    for (std::size_t j = 0; j < w_.size(); ++j) f += w_[j] * x[j];
    return y_mean_ + y_scale_ * f;
}

std::vector<double> LinearSvr::predict(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_row(X.row(r));
    return out;
}

}  // namespace exwa::ml
