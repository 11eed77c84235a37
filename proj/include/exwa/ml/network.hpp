#pragma once

// Small fully connected networks: used by the regression model and the GAN.
// Activations are stored samples-by-units, so a layer computes A * W + b.

#include "exwa/matrix.hpp"
#include "exwa/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace exwa::ml {

enum class Activation { identity, relu, leaky_relu, sigmoid };

struct DenseLayer {
    Eigen::MatrixXd weight;  // inputs x outputs
    Eigen::RowVectorXd bias;
    Activation activation = Activation::identity;
};

struct Gradients {
    std::vector<Eigen::MatrixXd> weight;
    std::vector<Eigen::RowVectorXd> bias;

    std::vector<double> flatten() const;
};

class Mlp {
public:
    struct Tape {
        std::vector<Eigen::MatrixXd> inputs;  // input to each layer
        std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
    };

    Mlp() = default;

    /// widths = {inputs, hidden..., outputs}; one activation per layer.
    /// Weights are He-normal for ReLU-family layers and Glorot-normal
    /// otherwise; biases start at zero. `zero_output_layer` zeroes the last
    /// layer's weights so the network starts as a constant.
    Mlp(const std::vector<std::size_t>& widths, const std::vector<Activation>& activations, Rng& rng,
        bool zero_output_layer = false);

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Tape& tape) const;

    /// Backpropagates dL/d(output). When `grad_input` is given it receives
    /// dL/d(input).
    Gradients backward(const Tape& tape, const Eigen::MatrixXd& grad_output,
                       Eigen::MatrixXd* grad_input = nullptr) const;

    std::size_t input_width() const;
    std::size_t output_width() const;
    std::size_t parameter_count() const;
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> flat);

    std::vector<DenseLayer>& layers() noexcept { return layers_; }
    const std::vector<DenseLayer>& layers() const noexcept { return layers_; }

    void apply_step(const Gradients& g, double learning_rate);

private:
    std::vector<DenseLayer> layers_;
};

/// Adam with the usual bias correction.
class AdamOptimizer {
public:
    AdamOptimizer(const Mlp& net, double learning_rate, double beta1 = 0.5, double beta2 = 0.999,
                  double eps = 1e-8);
    void step(Mlp& net, const Gradients& g);

private:
    double lr_, beta1_, beta2_, eps_;
    long long t_ = 0;
    Gradients m_;
    Gradients v_;
};

Eigen::MatrixXd to_eigen(const Matrix& m);
Matrix from_eigen(const Eigen::MatrixXd& m);

struct NetworkParams {
    std::vector<std::size_t> hidden{16, 16};
    std::size_t epochs = 200;
    double learning_rate = 0.01;
};

/// ReLU network with a linear output, trained by full-batch gradient descent
/// on 0.5 * mean squared error of the standardised target. The output layer
/// starts at zero, so training begins from the mean predictor.
class NeuralNetRegressor {
public:
    void fit(const Matrix& X, std::span<const double> y, const NetworkParams& params, std::uint64_t seed);

    std::vector<double> predict(const Matrix& X) const;

    const Mlp& network() const noexcept { return net_; }
    /// Training loss before the first step, then after every epoch.
    const std::vector<double>& loss_history() const noexcept { return loss_; }

    /// 0.5 * mean((net(X) - z)^2) and its gradient w.r.t. the flattened parameters.
    static std::pair<double, std::vector<double>> loss_and_gradient(const Mlp& net, const Eigen::MatrixXd& X,
                                                                    const Eigen::VectorXd& z);
    static double loss(const Mlp& net, const Eigen::MatrixXd& X, const Eigen::VectorXd& z);

private:
    Mlp net_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    std::vector<double> loss_;
};

}  // namespace exwa::ml
