#pragma once

// Vanilla GAN over min-max scaled tabular rows (every column in [0, 1]).

#include "exwa/matrix.hpp"
#include "exwa/ml/network.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace exwa::gan {

struct GanConfig {
    std::size_t noise_dim = 8;
    std::size_t generator_hidden = 32;
    std::size_t discriminator_hidden = 32;
    double learning_rate = 0.001;
    std::size_t epochs = 300;  // 0 leaves the generator at its initialisation
    std::size_t batch_size = 64;
    std::uint64_t seed = 42;
    double clip_epsilon = 1e-6;
};

void validate_config(const GanConfig& cfg);

/// mean log(clip(d_real)) + mean log(1 - clip(d_fake)), clipped to [eps, 1 - eps].
double gan_objective(std::span<const double> d_real, std::span<const double> d_fake, double eps = 1e-6);

struct EpochLoss {
    std::size_t epoch = 0;
    double discriminator_objective = 0.0;  // mean of the clipped game value over the epoch's batches
    double generator_loss = 0.0;           // mean of -log D(G(z))
};

struct Generator {
    ml::Mlp network;
    std::size_t noise_dim = 0;
    std::size_t width = 0;
    std::uint64_t seed = 0;
    std::vector<EpochLoss> history;
};

/// One discriminator step then one generator step per mini-batch. The
/// discriminator ascends the game value; the generator minimises the
/// non-saturating loss -log D(G(z)).
Generator train_gan(const Matrix& rows, const GanConfig& cfg);

/// n rows drawn with a dedicated noise stream; n = 0 gives an empty matrix of
/// the generator's width.
Matrix sample(const Generator& g, std::size_t n, std::uint64_t seed);

struct AugmentedRows {
    Matrix rows;
    std::vector<bool> synthetic;  // one flag per row
    std::size_t original_count = 0;
};

/// Originals first and untouched, then n synthetic rows.
AugmentedRows augment(const Matrix& train, const Generator& g, std::size_t n, std::uint64_t seed);

/// Delimited rows with a trailing provenance column (real | synthetic).
std::string to_csv(const AugmentedRows& rows, const std::vector<std::string>& header);
/// epoch,d_objective,g_loss
std::string history_csv(const Generator& g);
nlohmann::json to_json(const Generator& g);

}  // namespace exwa::gan
