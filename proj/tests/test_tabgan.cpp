#include <catch_amalgamated.hpp>

#include "exwa/error.hpp"
#include "exwa/gan/tabgan.hpp"
#include "exwa/random.hpp"

#include <cmath>

using namespace exwa;
using namespace exwa::gan;
using Catch::Matchers::WithinAbs;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an exwa::Error");
    return ErrorKind::usage;
}

Matrix toy_gaussian(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, 0) = 0.3 + 0.05 * rng.normal();
        m(i, 1) = 0.7 + 0.05 * rng.normal();
    }
    return m;
}

double column_mean(const Matrix& m, std::size_t c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, c);
    return s / static_cast<double>(m.rows());
}

double column_std(const Matrix& m, std::size_t c) {
    const double mu = column_mean(m, c);
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) s += (m(r, c) - mu) * (m(r, c) - mu);
    return std::sqrt(s / static_cast<double>(m.rows()));
}

}  // namespace

TEST_CASE("game value examples") {
    const std::vector<double> half(4, 0.5);
    CHECK_THAT(gan_objective(half, half), WithinAbs(2.0 * std::log(0.5), 1e-12));
    const std::vector<double> real{0.9};
    const std::vector<double> fake{0.1};
    CHECK_THAT(gan_objective(real, fake, 1e-6), WithinAbs(2.0 * std::log(0.9), 1e-12));

    const std::vector<double> one{1.0};
    const std::vector<double> zero{0.0};
    const double best = gan_objective(one, zero, 1e-6);
    CHECK(best < 0.0);
    CHECK(best > -3e-6);
    CHECK_THAT(best, WithinAbs(2.0 * std::log(1.0 - 1e-6), 1e-15));
}

TEST_CASE("game value errors") {
    const std::vector<double> ok{0.5};
    const std::vector<double> bad{1.2};
    const std::vector<double> neg{-0.1};
    const std::vector<double> empty;
    CHECK(kind_of([&] { gan_objective(bad, ok); }) == ErrorKind::domain);
    CHECK(kind_of([&] { gan_objective(ok, neg); }) == ErrorKind::domain);
    CHECK(kind_of([&] { gan_objective(empty, ok); }) == ErrorKind::shape);
}

TEST_CASE("constant discriminators: clip boundary and the one-half optimum") {
    // Maximum over constant outputs sits at d_real = 1 - eps, d_fake = eps.
    const double eps = 1e-6;
    double best = -1e300;
    double arg_r = 0.0;
    double arg_f = 0.0;
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            const std::vector<double> r{i / 100.0};
            const std::vector<double> f{j / 100.0};
            const double v = gan_objective(r, f, eps);
            if (v > best) {
                best = v;
                arg_r = r[0];
                arg_f = f[0];
            }
        }
    }
    CHECK(arg_r == 1.0);
    CHECK(arg_f == 0.0);
    CHECK_THAT(best, WithinAbs(2.0 * std::log(1.0 - eps), 1e-15));

    // When real and generated samples are indistinguishable a constant
    // discriminator d sees both as the same point: value log d + log(1 - d).
    double best_d = 0.0;
    double best_v = -1e300;
    for (int k = 1; k < 1000; ++k) {
        const double d = k / 1000.0;
        const std::vector<double> same{d};
        const double v = gan_objective(same, same, eps);
        if (v > best_v) {
            best_v = v;
            best_d = d;
        }
    }
    CHECK(best_d == 0.5);
}

TEST_CASE("config validation") {
    GanConfig c;
    CHECK_NOTHROW(validate_config(c));
    c.epochs = 0;
    CHECK_NOTHROW(validate_config(c));
    auto bad = GanConfig{};
    bad.noise_dim = 0;
    CHECK(kind_of([&] { validate_config(bad); }) == ErrorKind::config);
    bad = GanConfig{};
    bad.learning_rate = 0.0;
    CHECK(kind_of([&] { validate_config(bad); }) == ErrorKind::config);
    bad = GanConfig{};
    bad.learning_rate = 1.5;
    CHECK(kind_of([&] { validate_config(bad); }) == ErrorKind::config);
    bad = GanConfig{};
    bad.clip_epsilon = 0.5;
    CHECK(kind_of([&] { validate_config(bad); }) == ErrorKind::config);
    bad = GanConfig{};
    bad.batch_size = 0;
    CHECK(kind_of([&] { validate_config(bad); }) == ErrorKind::config);
}

TEST_CASE("generator matches the toy Gaussian moments") {
    const auto data = toy_gaussian(512, 1);
    GanConfig cfg;
    cfg.epochs = 500;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        cfg.seed = seed;
        const auto g = train_gan(data, cfg);
        REQUIRE(g.history.size() == 500);
        const auto s = sample(g, 1000, seed + 100);
        INFO("seed " << seed);
        CHECK_THAT(column_mean(s, 0), WithinAbs(0.3, 0.2));
        CHECK_THAT(column_mean(s, 1), WithinAbs(0.7, 0.2));
        for (std::size_t c = 0; c < 2; ++c) {
            const double ratio = column_std(s, c) / column_std(data, c);
            CHECK(ratio < 3.0);
            CHECK(ratio > 1.0 / 3.0);
        }
        for (double v : s.data()) CHECK(std::isfinite(v));
        for (const auto& e : g.history) {
            CHECK(std::isfinite(e.discriminator_objective));
            CHECK(std::isfinite(e.generator_loss));
        }
    }
}

TEST_CASE("training and sampling are deterministic") {
    const auto data = toy_gaussian(128, 2);
    GanConfig cfg;
    cfg.epochs = 20;
    const auto a = train_gan(data, cfg);
    const auto b = train_gan(data, cfg);
    CHECK(a.network.parameters() == b.network.parameters());
    CHECK(sample(a, 5, 9) == sample(a, 5, 9));
    CHECK(sample(a, 5, 9) != sample(a, 5, 10));

    cfg.seed = 43;
    const auto c = train_gan(data, cfg);
    CHECK(c.network.parameters() != a.network.parameters());
}

TEST_CASE("zero epochs leave the initialisation usable") {
    const auto data = toy_gaussian(64, 3);
    GanConfig cfg;
    cfg.epochs = 0;
    const auto g = train_gan(data, cfg);
    CHECK(g.history.empty());
    const auto s = sample(g, 10, 1);
    CHECK(s.rows() == 10);
    CHECK(s.cols() == 2);
    for (double v : s.data()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    const auto empty = sample(g, 0, 1);
    CHECK(empty.rows() == 0);
    CHECK(empty.cols() == 2);
}

TEST_CASE("training input errors") {
    GanConfig cfg;
    CHECK(kind_of([&] { train_gan(toy_gaussian(10, 1), cfg); }) == ErrorKind::too_small);
    auto data = toy_gaussian(64, 1);
    data(3, 1) = std::nan("");
    CHECK(kind_of([&] { train_gan(data, cfg); }) == ErrorKind::data);
}

TEST_CASE("augmentation keeps originals first and untouched") {
    Rng rng(4);
    Matrix train(207, 13);
    for (auto& v : train.data()) v = rng.uniform();
    const Matrix copy = train;
    GanConfig cfg;
    cfg.epochs = 2;
    const auto g = train_gan(train, cfg);

    const auto aug = augment(train, g, 310, 5);
    CHECK(aug.rows.rows() == 517);
    CHECK(aug.rows.cols() == 13);
    CHECK(aug.original_count == 207);
    CHECK(train == copy);
    for (std::size_t r = 0; r < 207; ++r) {
        for (std::size_t c = 0; c < 13; ++c) CHECK(aug.rows(r, c) == train(r, c));
        CHECK_FALSE(aug.synthetic[r]);
    }
    for (std::size_t r = 207; r < 517; ++r) CHECK(aug.synthetic[r]);

    const auto none = augment(train, g, 0, 5);
    CHECK(none.rows == train);

    CHECK(kind_of([&] { augment(Matrix(5, 4), g, 3, 1); }) == ErrorKind::shape);

    std::vector<std::string> header;
    for (int c = 0; c < 13; ++c) header.push_back("c" + std::to_string(c));
    const auto csv = to_csv(augment(train, g, 2, 5), header);
    CHECK(csv.find(",provenance\n") != std::string::npos);
    CHECK(csv.find(",synthetic\n") != std::string::npos);
    CHECK(csv.find(",real\n") != std::string::npos);

    const auto hist = history_csv(g);
    CHECK(hist.rfind("epoch,d_objective,g_loss\n", 0) == 0);
}
