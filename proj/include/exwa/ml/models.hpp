#pragma once

#include "exwa/execution.hpp"
#include "exwa/matrix.hpp"
#include "exwa/ml/boosting.hpp"
#include "exwa/ml/forest.hpp"
#include "exwa/ml/linear.hpp"
#include "exwa/ml/metrics.hpp"
#include "exwa/ml/network.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace exwa::ml {

enum class ModelKind { linear, random_forest, gbt, linear_svr, neural_net };

std::string to_string(ModelKind kind);

struct ModelSpec {
    std::string name;
    ModelKind kind = ModelKind::linear;
    std::uint64_t seed = 42;
    ForestParams forest;
    BoostingParams boosting;
    SvrParams svr;
    NetworkParams network;
};

/// Named presets: nn200, nn100, linear, rf, xgb, svr.
ModelSpec model_preset(const std::string& name, std::uint64_t seed = 42);

/// The six-model lineup reported by default.
std::vector<ModelSpec> default_lineup(std::uint64_t seed = 42);

struct TrainingInfo {
    std::size_t iterations = 0;  // epochs, trees or boosting rounds
    double final_loss = 0.0;
    std::vector<double> loss_history;
};

struct TrainedModel {
    std::string name;
    ModelKind kind = ModelKind::linear;
    std::size_t feature_count = 0;
    std::variant<LinearRegression, RandomForest, GradientBoostedTrees, LinearSvr, NeuralNetRegressor> impl;
    TrainingInfo info;
};

TrainedModel train(const ModelSpec& spec, const Matrix& X, std::span<const double> y,
                   Execution exec = Execution::parallel);

std::vector<double> predict(const TrainedModel& model, const Matrix& X);

FeatureImportance feature_importance(const TrainedModel& model);

struct ModelResult {
    std::string model;
    bool augmented = false;
    Metrics test;
    Metrics train;  // in-sample, on the rows the model was fitted to
    TrainingInfo info;
};

struct ModelReport {
    std::vector<ModelResult> rows;  // mean-predictor baseline rows included
    std::vector<std::string> feature_names;
    std::optional<FeatureImportance> importance;
};

struct TrainingSet {
    Matrix X;
    std::vector<double> y;
};

inline constexpr const char* kBaselineName = "mean-baseline";

/// Trains every spec on `train` (and again on `augmented` when given),
/// scores on `test`, and adds the mean-predictor baseline for each training
/// set. Importances come from the first random forest fitted without
/// augmentation.
ModelReport benchmark(const std::vector<ModelSpec>& specs, const TrainingSet& train, const TrainingSet& test,
                      const std::optional<TrainingSet>& augmented, std::vector<std::string> feature_names = {},
                      Execution exec = Execution::parallel);

/// Fixed-width tables: model x {with, without augmentation} x {RMSE, MAE},
/// plus feature importances.
std::string format_report(const ModelReport& report);
nlohmann::json to_json(const ModelReport& report);

}  // namespace exwa::ml
