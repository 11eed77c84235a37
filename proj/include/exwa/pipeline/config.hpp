#pragma once

#include "exwa/execution.hpp"
#include "exwa/gan/tabgan.hpp"
#include "exwa/group/hierarchy.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace exwa::pipeline {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr const char* kOutputDirEnv = "EXWA_OUTPUT_DIR";
inline constexpr const char* kDatasetEnv = "EXWA_FOREST_FIRES_CSV";

enum class Command { validate, bwm, hierarchy, synth, predict, all };

Command parse_command(const std::string& name);
std::string to_string(Command c);

/// Paths are stored resolved: entries from a config file are relative to
/// that file's directory, flag values relative to the working directory.
struct RunConfig {
    Command command = Command::all;
    std::filesystem::path config_dir;  // empty when no config file was given
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = kDefaultSeed;
    Execution execution = Execution::parallel;

    std::filesystem::path survey;
    double agreement_threshold = 0.778;

    std::filesystem::path bwm_dir;
    group::Aggregation aggregation = group::Aggregation::arithmetic_mean;

    std::filesystem::path dims;  // DM directory or weights document; defaults to bwm_dir
    std::filesystem::path locals;

    std::filesystem::path data;   // empty: resolve through the environment and fallbacks
    std::filesystem::path train;  // synth only: train on this file instead of the split
    double test_fraction = 0.6;
    std::vector<std::string> models{"nn200", "nn100", "linear", "rf", "xgb", "svr"};
    bool with_gan = false;
    bool log_target = false;
    bool one_hot_calendar = false;
    bool z_score = false;

    gan::GanConfig gan;        // gan.seed is overwritten by `seed`
    std::size_t gan_rows = 0;  // 0: restore the full dataset size
};

/// Reads a JSON config. Unknown keys are rejected.
RunConfig load_config(const std::filesystem::path& file, RunConfig base = {});

/// Settings that affect results (no paths, no output location).
nlohmann::json settings_json(const RunConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Hash of the settings plus the content of every input the command reads.
std::string config_hash(const RunConfig& cfg);

/// Explicit path, then $EXWA_FOREST_FIRES_CSV, then forestfires.csv and
/// forestfires_standin.csv in the config directory and in ./data.
std::filesystem::path resolve_dataset(const RunConfig& cfg);

}  // namespace exwa::pipeline
