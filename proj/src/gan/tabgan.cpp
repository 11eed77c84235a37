#include "exwa/gan/tabgan.hpp"

#include "exwa/error.hpp"
#include "exwa/io/csv.hpp"
#include "exwa/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace exwa::gan {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

double sigmoid(double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}

Eigen::MatrixXd noise(Rng& rng, std::size_t n, std::size_t dim) {
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = rng.normal();
    }
    return z;
}

std::vector<double> probabilities(const Eigen::MatrixXd& logits) {
    std::vector<double> p(static_cast<std::size_t>(logits.rows()));
    for (Eigen::Index i = 0; i < logits.rows(); ++i) p[static_cast<std::size_t>(i)] = sigmoid(logits(i, 0));
    return p;
}

}  // namespace

void validate_config(const GanConfig& cfg) {
    if (cfg.noise_dim == 0 || cfg.generator_hidden == 0 || cfg.discriminator_hidden == 0 || cfg.batch_size == 0) {
        fail(ErrorKind::config, "GAN noise size, layer widths and batch size must be at least 1");
    }
    if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0)) {
        fail(ErrorKind::config, "GAN learning rate must lie in (0, 1]");
    }
    if (!(cfg.clip_epsilon > 0.0 && cfg.clip_epsilon < 0.5)) {
        fail(ErrorKind::config, "GAN clip epsilon must lie in (0, 0.5)");
    }
}

double gan_objective(std::span<const double> d_real, std::span<const double> d_fake, double eps) {
    if (d_real.empty() || d_fake.empty()) fail(ErrorKind::shape, "GAN objective needs discriminator outputs");
    if (!(eps > 0.0 && eps < 0.5)) fail(ErrorKind::domain, "clip epsilon must lie in (0, 0.5)");
    auto clip = [eps](double p) {
        if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::domain, "discriminator output outside [0, 1]");
        return std::clamp(p, eps, 1.0 - eps);
    };
    double real = 0.0;
    for (double p : d_real) real += std::log(clip(p));
    double fake = 0.0;
    for (double p : d_fake) fake += std::log(1.0 - clip(p));
    return real / static_cast<double>(d_real.size()) + fake / static_cast<double>(d_fake.size());
}

Generator train_gan(const Matrix& rows, const GanConfig& cfg) {
    validate_config(cfg);
    if (rows.cols() == 0) fail(ErrorKind::shape, "GAN training rows have no columns");
    if (rows.rows() < cfg.batch_size) {
        fail(ErrorKind::too_small, "GAN training needs at least batch_size (" + std::to_string(cfg.batch_size) +
                                       ") rows, got " + std::to_string(rows.rows()));
    }
    for (double v : rows.data()) {
        if (!std::isfinite(v)) fail(ErrorKind::data, "non-finite value in GAN training rows");
    }

    const std::size_t width = rows.cols();
    Rng init(derive_seed(cfg.seed, kInitStream));
    Generator g;
    g.noise_dim = cfg.noise_dim;
    g.width = width;
    g.seed = cfg.seed;
    g.network = ml::Mlp({cfg.noise_dim, cfg.generator_hidden, width}, {ml::Activation::relu, ml::Activation::sigmoid}, init);
    // The discriminator's sigmoid is applied outside the network so the
    // log-loss gradients can be taken directly on the logit.
    ml::Mlp disc({width, cfg.discriminator_hidden, 1}, {ml::Activation::leaky_relu, ml::Activation::identity}, init);

    ml::AdamOptimizer g_opt(g.network, cfg.learning_rate);
    ml::AdamOptimizer d_opt(disc, cfg.learning_rate);
    Rng shuffle_rng(derive_seed(cfg.seed, kShuffleStream));
    Rng noise_rng(derive_seed(cfg.seed, kNoiseStream));

    const Eigen::MatrixXd data = ml::to_eigen(rows);
    std::vector<std::size_t> order(rows.rows());
    const std::size_t batches = rows.rows() / cfg.batch_size;
    const auto m = static_cast<double>(cfg.batch_size);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        double d_sum = 0.0;
        double g_sum = 0.0;
        for (std::size_t b = 0; b < batches; ++b) {
            Eigen::MatrixXd real(static_cast<Eigen::Index>(cfg.batch_size), static_cast<Eigen::Index>(width));
            for (std::size_t i = 0; i < cfg.batch_size; ++i) {
                real.row(static_cast<Eigen::Index>(i)) = data.row(static_cast<Eigen::Index>(order[b * cfg.batch_size + i]));
            }

            // Discriminator ascent on the game value.
            const Eigen::MatrixXd fake = g.network.forward(noise(noise_rng, cfg.batch_size, cfg.noise_dim));
            ml::Mlp::Tape real_tape;
            ml::Mlp::Tape fake_tape;
            const Eigen::MatrixXd real_logit = disc.forward(real, real_tape);
            const Eigen::MatrixXd fake_logit = disc.forward(fake, fake_tape);
            const auto p_real = probabilities(real_logit);
            const auto p_fake = probabilities(fake_logit);
            const double value = gan_objective(p_real, p_fake, cfg.clip_epsilon);
            Eigen::MatrixXd grad_real(real_logit.rows(), 1);
            Eigen::MatrixXd grad_fake(fake_logit.rows(), 1);
            for (Eigen::Index i = 0; i < grad_real.rows(); ++i) {
                grad_real(i, 0) = (p_real[static_cast<std::size_t>(i)] - 1.0) / m;
                grad_fake(i, 0) = p_fake[static_cast<std::size_t>(i)] / m;
            }
            auto d_grad = disc.backward(real_tape, grad_real);
            const auto d_grad_fake = disc.backward(fake_tape, grad_fake);
            for (std::size_t l = 0; l < d_grad.weight.size(); ++l) {
                d_grad.weight[l] += d_grad_fake.weight[l];
                d_grad.bias[l] += d_grad_fake.bias[l];
            }
            d_opt.step(disc, d_grad);

            // Generator step on -log D(G(z)).
            ml::Mlp::Tape gen_tape;
            const Eigen::MatrixXd generated = g.network.forward(noise(noise_rng, cfg.batch_size, cfg.noise_dim), gen_tape);
            ml::Mlp::Tape judge_tape;
            const auto p_gen = probabilities(disc.forward(generated, judge_tape));
            double g_loss = 0.0;
            Eigen::MatrixXd grad_logit(static_cast<Eigen::Index>(cfg.batch_size), 1);
            for (std::size_t i = 0; i < cfg.batch_size; ++i) {
                g_loss -= std::log(std::clamp(p_gen[i], cfg.clip_epsilon, 1.0 - cfg.clip_epsilon));
                grad_logit(static_cast<Eigen::Index>(i), 0) = (p_gen[i] - 1.0) / m;
            }
            g_loss /= m;
            Eigen::MatrixXd grad_sample;
            disc.backward(judge_tape, grad_logit, &grad_sample);
            g_opt.step(g.network, g.network.backward(gen_tape, grad_sample));

            if (!std::isfinite(value) || !std::isfinite(g_loss)) {
                fail(ErrorKind::divergence, "GAN loss became non-finite at epoch " + std::to_string(epoch));
            }
            d_sum += value;
            g_sum += g_loss;
        }
        g.history.push_back({epoch, d_sum / static_cast<double>(batches), g_sum / static_cast<double>(batches)});
    }
    return g;
}

Matrix sample(const Generator& g, std::size_t n, std::uint64_t seed) {
    if (n == 0) return Matrix(0, g.width);
    Rng rng(seed);
    return ml::from_eigen(g.network.forward(noise(rng, n, g.noise_dim)));
}

AugmentedRows augment(const Matrix& train, const Generator& g, std::size_t n, std::uint64_t seed) {
    if (train.cols() != g.width) {
        fail(ErrorKind::shape, "generator produces " + std::to_string(g.width) + " columns but training rows have " +
                                   std::to_string(train.cols()));
    }
    AugmentedRows out;
    out.original_count = train.rows();
    out.rows = vconcat(train, sample(g, n, seed));
    out.synthetic.assign(train.rows(), false);
    out.synthetic.resize(train.rows() + n, true);
    return out;
}

std::string to_csv(const AugmentedRows& rows, const std::vector<std::string>& header) {
    if (header.size() != rows.rows.cols()) fail(ErrorKind::shape, "header width does not match the rows");
    std::ostringstream out;
    for (const auto& h : header) out << io::csv_escape(h) << ',';
    out << "provenance\n";
    for (std::size_t r = 0; r < rows.rows.rows(); ++r) {
        for (double v : rows.rows.row(r)) out << io::format_double(v) << ',';
        out << (rows.synthetic[r] ? "synthetic" : "real") << '\n';
    }
    return out.str();
}

std::string history_csv(const Generator& g) {
    std::ostringstream out;
    out << "epoch,d_objective,g_loss\n";
    for (const auto& h : g.history) {
        out << h.epoch << ',' << io::format_double(h.discriminator_objective) << ','
            << io::format_double(h.generator_loss) << '\n';
    }
    return out.str();
}

nlohmann::json to_json(const Generator& g) {
    nlohmann::json history = nlohmann::json::array();
    for (const auto& h : g.history) {
        history.push_back({{"epoch", h.epoch}, {"d_objective", h.discriminator_objective}, {"g_loss", h.generator_loss}});
    }
    return {{"noise_dim", g.noise_dim}, {"width", g.width}, {"seed", g.seed},
            {"parameter_count", g.network.parameter_count()}, {"history", std::move(history)}};
}

}  // namespace exwa::gan
