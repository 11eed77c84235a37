#include "exwa/ml/network.hpp"

#include "exwa/error.hpp"

#include <cmath>
#include <string>

namespace exwa::ml {

namespace {

constexpr double kLeakySlope = 0.2;

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation a) {
    switch (a) {
        case Activation::identity: return z;
        case Activation::relu: return z.cwiseMax(0.0);
        case Activation::leaky_relu: return z.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
        case Activation::sigmoid:
            return z.unaryExpr([](double v) {
                if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
                const double e = std::exp(v);
                return e / (1.0 + e);
            });
    }
    return z;
}

/// Derivative of the activation, evaluated from the pre-activation.
Eigen::MatrixXd derivative(const Eigen::MatrixXd& z, Activation a) {
    switch (a) {
        case Activation::identity: return Eigen::MatrixXd::Ones(z.rows(), z.cols());
        case Activation::relu: return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
        case Activation::leaky_relu: return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : kLeakySlope; });
        case Activation::sigmoid: {
            const Eigen::MatrixXd s = activate(z, Activation::sigmoid);
            return s.array() * (1.0 - s.array());
        }
    }
    return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

}  // namespace

std::vector<double> Gradients::flatten() const {
    std::vector<double> out;
    for (std::size_t l = 0; l < weight.size(); ++l) {
        out.insert(out.end(), weight[l].data(), weight[l].data() + weight[l].size());
        out.insert(out.end(), bias[l].data(), bias[l].data() + bias[l].size());
    }
    return out;
}

Mlp::Mlp(const std::vector<std::size_t>& widths, const std::vector<Activation>& activations, Rng& rng,
         bool zero_output_layer) {
    if (widths.size() < 2 || activations.size() != widths.size() - 1) {
        fail(ErrorKind::shape, "network needs one activation per layer");
    }
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        if (widths[l] == 0 || widths[l + 1] == 0) fail(ErrorKind::shape, "network layer widths must be positive");
        DenseLayer layer;
        const auto in = static_cast<Eigen::Index>(widths[l]);
        const auto out = static_cast<Eigen::Index>(widths[l + 1]);
        layer.activation = activations[l];
        const bool relu_family = layer.activation == Activation::relu || layer.activation == Activation::leaky_relu;
        const double sd = relu_family ? std::sqrt(2.0 / static_cast<double>(in))
                                      : std::sqrt(2.0 / static_cast<double>(in + out));
        layer.weight.resize(in, out);
        // Column-major fill order is fixed, so the draw sequence is too.
        for (Eigen::Index c = 0; c < out; ++c) {
            for (Eigen::Index r = 0; r < in; ++r) layer.weight(r, c) = rng.normal(0.0, sd);
        }
        layer.bias = Eigen::RowVectorXd::Zero(out);
        layers_.push_back(std::move(layer));
    }
    if (zero_output_layer) layers_.back().weight.setZero();
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd a = x;
    for (const auto& layer : layers_) {
        Eigen::MatrixXd z = a * layer.weight;
        z.rowwise() += layer.bias;
        a = activate(z, layer.activation);
    }
    return a;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Tape& tape) const {
    tape.inputs.clear();
    tape.pre.clear();
    Eigen::MatrixXd a = x;
    for (const auto& layer : layers_) {
        tape.inputs.push_back(a);
        Eigen::MatrixXd z = a * layer.weight;
        z.rowwise() += layer.bias;
        a = activate(z, layer.activation);
        tape.pre.push_back(std::move(z));
    }
    return a;
}

Gradients Mlp::backward(const Tape& tape, const Eigen::MatrixXd& grad_output, Eigen::MatrixXd* grad_input) const {
    Gradients g;
    g.weight.resize(layers_.size());
    g.bias.resize(layers_.size());
    Eigen::MatrixXd delta = grad_output;
    for (std::size_t k = layers_.size(); k-- > 0;) {
        const auto& layer = layers_[k];
        delta = delta.cwiseProduct(derivative(tape.pre[k], layer.activation));
        g.weight[k] = tape.inputs[k].transpose() * delta;
        g.bias[k] = delta.colwise().sum();
        if (k > 0 || grad_input != nullptr) {
            Eigen::MatrixXd prev = delta * layer.weight.transpose();
            if (k == 0) {
                *grad_input = std::move(prev);
            } else {
                delta = std::move(prev);
            }
        }
    }
    return g;
}

std::size_t Mlp::input_width() const { return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.front().weight.rows()); }

std::size_t Mlp::output_width() const { return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.back().weight.cols()); }

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
    return n;
}

std::vector<double> Mlp::parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto& l : layers_) {
        out.insert(out.end(), l.weight.data(), l.weight.data() + l.weight.size());
        out.insert(out.end(), l.bias.data(), l.bias.data() + l.bias.size());
    }
    return out;
}

void Mlp::set_parameters(std::span<const double> flat) {
    if (flat.size() != parameter_count()) fail(ErrorKind::shape, "parameter vector has the wrong length");
    std::size_t at = 0;
    for (auto& l : layers_) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(at), l.weight.size(), l.weight.data());
        at += static_cast<std::size_t>(l.weight.size());
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(at), l.bias.size(), l.bias.data());
        at += static_cast<std::size_t>(l.bias.size());
    }
}

void Mlp::apply_step(const Gradients& g, double learning_rate) {
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        layers_[l].weight -= learning_rate * g.weight[l];
        layers_[l].bias -= learning_rate * g.bias[l];
    }
}

AdamOptimizer::AdamOptimizer(const Mlp& net, double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (const auto& l : net.layers()) {
        m_.weight.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
        m_.bias.push_back(Eigen::RowVectorXd::Zero(l.bias.size()));
    }
    v_ = m_;
}

void AdamOptimizer::step(Mlp& net, const Gradients& g) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
        m = beta1_ * m + (1.0 - beta1_) * grad;
        v = beta2_ * v + (1.0 - beta2_) * grad.cwiseProduct(grad);
        param.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
    };
    auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        update(layers[l].weight, g.weight[l], m_.weight[l], v_.weight[l]);
        update(layers[l].bias, g.bias[l], m_.bias[l], v_.bias[l]);
    }
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    }
    return out;
}

Matrix from_eigen(const Eigen::MatrixXd& m) {
    Matrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    }
    return out;
}

std::pair<double, std::vector<double>> NeuralNetRegressor::loss_and_gradient(const Mlp& net, const Eigen::MatrixXd& X,
                                                                             const Eigen::VectorXd& z) {
    Mlp::Tape tape;
    const Eigen::MatrixXd out = net.forward(X, tape);
    const Eigen::VectorXd residual = out.col(0) - z;
    const auto n = static_cast<double>(X.rows());
    const double value = 0.5 * residual.squaredNorm() / n;
    const Eigen::MatrixXd grad_out = residual / n;
    return {value, net.backward(tape, grad_out).flatten()};
}

double NeuralNetRegressor::loss(const Mlp& net, const Eigen::MatrixXd& X, const Eigen::VectorXd& z) {
    const Eigen::VectorXd residual = net.forward(X).col(0) - z;
    return 0.5 * residual.squaredNorm() / static_cast<double>(X.rows());
}

void NeuralNetRegressor::fit(const Matrix& X, std::span<const double> y, const NetworkParams& params,
                             std::uint64_t seed) {
    if (X.rows() != y.size()) fail(ErrorKind::shape, "feature rows and targets differ in length");
    if (X.rows() == 0) fail(ErrorKind::too_small, "neural network needs training rows");
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
        fail(ErrorKind::domain, "learning rate must lie in (0, 1]");
    }

    const auto n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    y_mean_ = mean;
    y_scale_ = var > 0.0 ? std::sqrt(var / n) : 1.0;

    std::vector<std::size_t> widths{X.cols()};
    std::vector<Activation> acts;
    for (auto h : params.hidden) {
        widths.push_back(h);
        acts.push_back(Activation::relu);
    }
    widths.push_back(1);
    acts.push_back(Activation::identity);
    Rng rng(seed);
    net_ = Mlp(widths, acts, rng, /*zero_output_layer=*/true);

    const Eigen::MatrixXd features = to_eigen(X);
    Eigen::VectorXd z(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) z(static_cast<Eigen::Index>(i)) = (y[i] - y_mean_) / y_scale_;

    loss_.assign(1, loss(net_, features, z));
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        Mlp::Tape tape;
        const Eigen::MatrixXd out = net_.forward(features, tape);
        const Eigen::MatrixXd grad_out = (out.col(0) - z) / n;
        net_.apply_step(net_.backward(tape, grad_out), params.learning_rate);
        const double value = loss(net_, features, z);
        if (!std::isfinite(value)) {
            fail(ErrorKind::divergence, "neural network loss diverged at epoch " + std::to_string(epoch));
        }
        loss_.push_back(value);
    }
}

std::vector<double> NeuralNetRegressor::predict(const Matrix& X) const {
    if (X.rows() == 0) return {};
    const Eigen::MatrixXd out = net_.forward(to_eigen(X));
    std::vector<double> pred(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) pred[i] = y_mean_ + y_scale_ * out(static_cast<Eigen::Index>(i), 0);
    return pred;
}

}  // namespace exwa::ml
