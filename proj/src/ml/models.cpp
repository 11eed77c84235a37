#include "exwa/ml/models.hpp"

#include "exwa/error.hpp"
#include "exwa/io/csv.hpp"

#include <cmath>
#include <sstream>

namespace exwa::ml {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::linear: return "linear";
        case ModelKind::random_forest: return "random_forest";
        case ModelKind::gbt: return "gbt";
        case ModelKind::linear_svr: return "linear_svr";
        case ModelKind::neural_net: return "neural_net";
    }
    return "unknown";
}

ModelSpec model_preset(const std::string& name, std::uint64_t seed) {
    ModelSpec spec;
    spec.seed = seed;
    const auto key = io::to_lower(name);
    if (key == "nn200" || key == "nn") {
        spec.name = "NN (200 epochs)";
        spec.kind = ModelKind::neural_net;
        spec.network.epochs = 200;
    } else if (key == "nn100") {
        spec.name = "NN (100 epochs)";
        spec.kind = ModelKind::neural_net;
        spec.network.epochs = 100;
    } else if (key == "linear" || key == "lr") {
        spec.name = "Linear Regression";
        spec.kind = ModelKind::linear;
    } else if (key == "rf" || key == "random_forest") {
        spec.name = "Random Forest";
        spec.kind = ModelKind::random_forest;
    } else if (key == "xgb" || key == "gbt") {
        spec.name = "Gradient Boosting";
        spec.kind = ModelKind::gbt;
    } else if (key == "svr") {
        spec.name = "SVR";
        spec.kind = ModelKind::linear_svr;
    } else {
        fail(ErrorKind::config, "unknown model '" + name + "' (expected nn200, nn100, linear, rf, xgb or svr)");
    }
    return spec;
}

std::vector<ModelSpec> default_lineup(std::uint64_t seed) {
    std::vector<ModelSpec> out;
    for (const char* name : {"nn200", "nn100", "linear", "rf", "xgb", "svr"}) out.push_back(model_preset(name, seed));
    return out;
}

namespace {

void check_inputs(const Matrix& X, std::span<const double> y) {
    if (X.cols() == 0) fail(ErrorKind::shape, "training matrix has zero features");
    if (X.rows() != y.size()) {
        fail(ErrorKind::shape, std::to_string(X.rows()) + " feature rows but " + std::to_string(y.size()) + " targets");
    }
    if (X.rows() < 2) fail(ErrorKind::shape, "training needs at least two rows");
    for (double v : X.data()) {
        if (!std::isfinite(v)) fail(ErrorKind::data, "non-finite value in training features");
    }
    for (double v : y) {
        if (!std::isfinite(v)) fail(ErrorKind::data, "non-finite value in training targets");
    }
}

}  // namespace

TrainedModel train(const ModelSpec& spec, const Matrix& X, std::span<const double> y, Execution exec) {
    check_inputs(X, y);
    TrainedModel model;
    model.name = spec.name.empty() ? to_string(spec.kind) : spec.name;
    model.kind = spec.kind;
    model.feature_count = X.cols();

    switch (spec.kind) {
        case ModelKind::linear: {
            LinearRegression m;
            m.fit(X, y);
            model.impl = std::move(m);
            model.info.iterations = 1;
            break;
        }
        case ModelKind::random_forest: {
            RandomForest m;
            m.fit(X, y, spec.forest, spec.seed, exec);
            model.info.iterations = m.trees().size();
            model.impl = std::move(m);
            break;
        }
        case ModelKind::gbt: {
            GradientBoostedTrees m;
            m.fit(X, y, spec.boosting);
            model.info.iterations = m.rounds();
            model.info.loss_history = m.loss_history();
            model.impl = std::move(m);
            break;
        }
        case ModelKind::linear_svr: {
            LinearSvr m;
            m.fit(X, y, spec.svr);
            model.info.iterations = spec.svr.epochs;
            model.info.loss_history = m.loss_history();
            model.impl = std::move(m);
            break;
        }
        case ModelKind::neural_net: {
            NeuralNetRegressor m;
            m.fit(X, y, spec.network, spec.seed);
            model.info.iterations = spec.network.epochs;
            model.info.loss_history = m.loss_history();
            model.impl = std::move(m);
            break;
        }
    }
    const auto fitted = predict(model, X);
    double sse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sse += (fitted[i] - y[i]) * (fitted[i] - y[i]);
    model.info.final_loss = sse / static_cast<double>(y.size());
    if (!std::isfinite(model.info.final_loss)) fail(ErrorKind::divergence, model.name + ": non-finite training loss");
    return model;
}

std::vector<double> predict(const TrainedModel& model, const Matrix& X) {
    if (X.rows() == 0) return {};
    if (X.cols() != model.feature_count) {
        fail(ErrorKind::shape, model.name + " was trained on " + std::to_string(model.feature_count) +
                                   " features, got " + std::to_string(X.cols()));
    }
    return std::visit([&](const auto& m) { return m.predict(X); }, model.impl);
}

FeatureImportance feature_importance(const TrainedModel& model) {
    const auto* forest = std::get_if<RandomForest>(&model.impl);
    if (forest == nullptr) {
        fail(ErrorKind::kind, "feature importance needs a random forest, got " + to_string(model.kind));
    }
    return forest->feature_importance();
}

namespace {

ModelResult baseline_row(const TrainingSet& train, const TrainingSet& test, bool augmented) {
    const double mean = stable_mean(train.y);
    ModelResult r;
    r.model = kBaselineName;
    r.augmented = augmented;
    r.train = evaluate(train.y, std::vector<double>(train.y.size(), mean));
    r.test = evaluate(test.y, std::vector<double>(test.y.size(), mean));
    return r;
}

}  // namespace

ModelReport benchmark(const std::vector<ModelSpec>& specs, const TrainingSet& train, const TrainingSet& test,
                      const std::optional<TrainingSet>& augmented, std::vector<std::string> feature_names,
                      Execution exec) {
    if (specs.empty()) fail(ErrorKind::config, "no models requested");
    ModelReport report;
    report.feature_names = std::move(feature_names);

    auto run = [&](const TrainingSet& fit_on, bool is_augmented) {
        report.rows.push_back(baseline_row(fit_on, test, is_augmented));
        for (const auto& spec : specs) {
            const auto model = ml::train(spec, fit_on.X, fit_on.y, exec);
            ModelResult r;
            r.model = model.name;
            r.augmented = is_augmented;
            r.train = evaluate(fit_on.y, predict(model, fit_on.X));
            r.test = evaluate(test.y, predict(model, test.X));
            r.info = model.info;
            if (!is_augmented && !report.importance && model.kind == ModelKind::random_forest) {
                report.importance = feature_importance(model);
            }
            report.rows.push_back(std::move(r));
        }
    };
    run(train, false);
    if (augmented) run(*augmented, true);
    return report;
}

namespace {

std::string pad(std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
}

const ModelResult* find_row(const ModelReport& report, const std::string& model, bool augmented, std::size_t nth) {
    std::size_t seen = 0;
    for (const auto& r : report.rows) {
        if (r.model == model && r.augmented == augmented && seen++ == nth) return &r;
    }
    return nullptr;
}

}  // namespace

std::string format_report(const ModelReport& report) {
    std::vector<std::string> models;
    std::vector<std::size_t> occurrence;
    for (const auto& r : report.rows) {
        if (r.augmented) continue;
        occurrence.push_back(static_cast<std::size_t>(std::count(models.begin(), models.end(), r.model)));
        models.push_back(r.model);
    }
    const bool has_augmented = std::any_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return r.augmented; });

    std::size_t width = 6;
    for (const auto& m : models) width = std::max(width, m.size());

    auto cell = [](const ModelResult* r, bool rmse) {
        return r == nullptr ? std::string("-") : io::format_fixed(rmse ? r->test.rmse : r->test.mae, 4);
    };
    std::ostringstream out;
    out << "Test-set error (RMSE / MAE)\n";
    out << pad("Model", width) << "  " << pad("With augmentation", 22) << "  Without augmentation\n";
    out << pad("", width) << "  " << pad("RMSE", 10) << "  " << pad("MAE", 10) << "  " << pad("RMSE", 10) << "  MAE\n";
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto* with = has_augmented ? find_row(report, models[i], true, occurrence[i]) : nullptr;
        const auto* without = find_row(report, models[i], false, occurrence[i]);
        out << pad(models[i], width) << "  " << pad(cell(with, true), 10) << "  " << pad(cell(with, false), 10) << "  "
            << pad(cell(without, true), 10) << "  " << cell(without, false) << '\n';
    }

    out << "\nIn-sample RMSE on each model's own training rows\n";
    out << pad("Model", width) << "  " << pad("With augmentation", 18) << "  Without augmentation\n";
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto* with = has_augmented ? find_row(report, models[i], true, occurrence[i]) : nullptr;
        const auto* without = find_row(report, models[i], false, occurrence[i]);
        out << pad(models[i], width) << "  "
            << pad(with ? io::format_fixed(with->train.rmse, 4) : std::string("-"), 18) << "  "
            << (without ? io::format_fixed(without->train.rmse, 4) : std::string("-")) << '\n';
    }

    if (report.importance) {
        out << "\nRandom-forest feature importance";
        if (report.importance->uniform_fallback) out << " (no informative split; uniform fallback)";
        out << '\n';
        for (std::size_t f = 0; f < report.importance->values.size(); ++f) {
            const auto name = f < report.feature_names.size() ? report.feature_names[f] : "f" + std::to_string(f);
            out << pad(name, 12) << "  " << io::format_fixed(report.importance->values[f], 4) << '\n';
        }
    }
    return out.str();
}

nlohmann::json to_json(const ModelReport& report) {
    auto metrics = [](const Metrics& m) { return nlohmann::json{{"rmse", m.rmse}, {"mae", m.mae}, {"n", m.n}}; };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"model", r.model},
                        {"augmented", r.augmented},
                        {"test", metrics(r.test)},
                        {"train", metrics(r.train)},
                        {"iterations", r.info.iterations},
                        {"final_training_mse", r.info.final_loss}});
    }
    nlohmann::json out{{"rows", std::move(rows)}, {"feature_names", report.feature_names}};
    if (report.importance) {
        out["feature_importance"] = {{"values", report.importance->values},
                                     {"uniform_fallback", report.importance->uniform_fallback}};
    } else {
        out["feature_importance"] = nullptr;
    }
    return out;
}

}  // namespace exwa::ml
