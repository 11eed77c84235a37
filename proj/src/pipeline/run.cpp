#include "exwa/pipeline/run.hpp"

#include "exwa/bwm/bwm.hpp"
#include "exwa/delphi/cvi.hpp"
#include "exwa/error.hpp"
#include "exwa/fire/dataset.hpp"
#include "exwa/gan/tabgan.hpp"
#include "exwa/group/hierarchy.hpp"
#include "exwa/io/csv.hpp"
#include "exwa/ml/models.hpp"
#include "exwa/random.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace exwa::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSampleStream = 101;

/// Re-raises errors from reading `path` with the file name in front.
template <class F>
auto with_file(const fs::path& path, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        fail(e.kind(), path.string() + ": " + e.message());
    } catch (const json::exception& e) {
        fail(ErrorKind::parse, path.string() + ": " + e.what());
    }
}

void require_path(const fs::path& p, const std::string& what) {
    if (p.empty()) fail(ErrorKind::usage, what + " not given");
    if (!fs::exists(p)) fail(ErrorKind::io, what + " '" + p.string() + "' does not exist");
}

std::string pad(std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
}

// ---- BWM helpers --------------------------------------------------------

struct DecisionMaker {
    std::string file;
    bwm::BwmInstance instance;
    std::vector<std::string> names;
};

struct GroupResult {
    std::vector<DecisionMaker> dms;
    std::vector<bwm::BwmSolution> solutions;
    group::LabeledWeights aggregate;
};

std::vector<DecisionMaker> load_decision_makers(const fs::path& dir) {
    require_path(dir, "decision-maker directory");
    if (!fs::is_directory(dir)) fail(ErrorKind::io, "'" + dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) fail(ErrorKind::data, "no decision-maker files found in '" + dir.string() + "'");

    std::vector<DecisionMaker> out;
    for (const auto& f : files) {
        out.push_back(with_file(f, [&] {
            const auto doc = json::parse(io::read_file(f.string()));
            DecisionMaker dm;
            dm.file = f.filename().string();
            dm.instance = bwm::instance_from_json(doc);
            if (dm.instance.decision_maker.empty()) dm.instance.decision_maker = f.stem().string();
            if (doc.contains("names")) dm.names = doc.at("names").get<std::vector<std::string>>();
            return dm;
        }));
        if (out.back().instance.criteria != out.front().instance.criteria) {
            fail(ErrorKind::schema, (dir / out.back().file).string() + ": criteria differ from " + out.front().file);
        }
    }
    return out;
}

GroupResult solve_group(const fs::path& dir, const RunConfig& cfg) {
    GroupResult g;
    g.dms = load_decision_makers(dir);
    std::vector<bwm::BwmInstance> instances;
    for (const auto& dm : g.dms) instances.push_back(dm.instance);
    g.solutions = bwm::solve_batch(instances, cfg.execution);
    std::vector<bwm::WeightVector> vectors;
    for (const auto& s : g.solutions) vectors.push_back(s.result);
    g.aggregate.codes = g.dms.front().instance.criteria;
    g.aggregate.names = g.dms.front().names;
    g.aggregate.weights = group::aggregate_weights(vectors, cfg.aggregation);
    return g;
}

json group_json(const GroupResult& g, const RunConfig& cfg) {
    json dms = json::array();
    for (std::size_t i = 0; i < g.dms.size(); ++i) {
        const auto& inst = g.dms[i].instance;
        const auto& s = g.solutions[i];
        dms.push_back({{"decision_maker", inst.decision_maker},
                       {"file", g.dms[i].file},
                       {"best", inst.criteria[inst.best]},
                       {"worst", inst.criteria[inst.worst]},
                       {"weights", s.result.weights},
                       {"xi_star", s.result.xi_star},
                       {"consistency_ratio", bwm::consistency_ratio(s.result.xi_star, inst.best_to_worst())},
                       {"multiple_optima", s.multiple_optima}});
    }
    return {{"criteria", g.aggregate.codes},
            {"names", g.aggregate.names},
            {"aggregation", group::to_string(cfg.aggregation)},
            {"decision_makers", std::move(dms)},
            {"aggregate",
             {{"weights", g.aggregate.weights.weights},
              {"xi_star", g.aggregate.weights.xi_star},
              {"ranks", group::rank(g.aggregate.weights.weights)}}}};
}

std::string group_text(const GroupResult& g, const RunConfig& cfg) {
    std::ostringstream out;
    const auto& codes = g.aggregate.codes;
    out << "Best-Worst weights per decision-maker (" << g.dms.size() << " files)\n";
    out << pad("DM", 8);
    for (const auto& c : codes) out << pad(c, 9);
    out << pad("xi*", 9) << pad("CR", 9) << "note\n";
    for (std::size_t i = 0; i < g.dms.size(); ++i) {
        const auto& s = g.solutions[i];
        out << pad(g.dms[i].instance.decision_maker, 8);
        for (double w : s.result.weights) out << pad(io::format_fixed(w, 4), 9);
        out << pad(io::format_fixed(s.result.xi_star, 4), 9)
            << pad(io::format_fixed(bwm::consistency_ratio(s.result.xi_star, g.dms[i].instance.best_to_worst()), 4), 9)
            << (s.multiple_optima ? "multiple optima" : "") << '\n';
    }
    const auto ranks = group::rank(g.aggregate.weights.weights);
    out << "\nGroup weights (" << group::to_string(cfg.aggregation) << ")\n";
    for (std::size_t j = 0; j < codes.size(); ++j) {
        const auto name = j < g.aggregate.names.size() ? g.aggregate.names[j] : std::string();
        out << pad(codes[j], 8) << pad(name, 28) << pad(io::format_fixed(g.aggregate.weights.weights[j], 4), 9)
            << "rank " << ranks[j] << '\n';
    }
    out << "max xi* " << io::format_fixed(g.aggregate.weights.xi_star, 4) << '\n';
    return out.str();
}

/// A DM directory is solved and pooled; a file holds either a bwm report or
/// {codes, names?, weights}.
group::LabeledWeights load_weights(const fs::path& p, const RunConfig& cfg) {
    if (fs::is_directory(p)) return solve_group(p, cfg).aggregate;
    return with_file(p, [&] {
        auto doc = json::parse(io::read_file(p.string()));
        if (doc.contains("result")) doc = doc.at("result");
        group::LabeledWeights lw;
        if (doc.contains("aggregate")) {
            lw.codes = doc.at("criteria").get<std::vector<std::string>>();
            lw.weights.weights = doc.at("aggregate").at("weights").get<std::vector<double>>();
            lw.weights.xi_star = doc.at("aggregate").value("xi_star", 0.0);
        } else {
            lw.codes = doc.at("codes").get<std::vector<std::string>>();
            lw.weights.weights = doc.at("weights").get<std::vector<double>>();
        }
        if (doc.contains("names")) lw.names = doc.at("names").get<std::vector<std::string>>();
        if (lw.codes.size() != lw.weights.weights.size()) fail(ErrorKind::shape, "codes and weights differ in length");
        return lw;
    });
}

// ---- dataset helpers ----------------------------------------------------

struct Prepared {
    fire::FireDataset dataset;
    fire::Split split;
    fs::path path;
};

Prepared prepare(const RunConfig& cfg) {
    Prepared p;
    p.path = resolve_dataset(cfg);
    p.dataset = with_file(p.path, [&] { return fire::load_dataset(p.path.string()); });
    p.split = fire::split(p.dataset, {cfg.test_fraction, cfg.seed});
    return p;
}

fire::CalendarEncoding encoding(const RunConfig& cfg) {
    return cfg.one_hot_calendar ? fire::CalendarEncoding::one_hot : fire::CalendarEncoding::ordinal;
}

fire::TargetTransform transform(const RunConfig& cfg) {
    return cfg.log_target ? fire::TargetTransform::log1p : fire::TargetTransform::raw;
}

Matrix with_target(const Matrix& X, const std::vector<double>& y) {
    return hconcat(X, Matrix(y.size(), 1, y));
}

struct Synthesis {
    gan::Generator generator;
    gan::AugmentedRows augmented;  // raw units, target in the last column
    std::size_t rows = 0;
};

/// Trains the GAN on min-max scaled [features | target] and maps synthetic
/// rows back to raw units.
Synthesis synthesize(const Matrix& raw_rows, std::size_t n, const RunConfig& cfg) {
    auto gcfg = cfg.gan;
    gcfg.seed = cfg.seed;
    const auto scaler = fire::fit_scaler(raw_rows, fire::ScalingMode::min_max);
    Synthesis s;
    s.rows = n;
    s.generator = gan::train_gan(scaler.transform(raw_rows), gcfg);
    s.augmented = gan::augment(scaler.transform(raw_rows), s.generator, n, derive_seed(cfg.seed, kSampleStream));
    s.augmented.rows = scaler.inverse_transform(s.augmented.rows);
    // Keep the original rows bit-exact rather than round-tripped.
    for (std::size_t r = 0; r < raw_rows.rows(); ++r) {
        std::copy(raw_rows.row(r).begin(), raw_rows.row(r).end(), s.augmented.rows.row(r).begin());
    }
    return s;
}

std::size_t synthetic_count(const RunConfig& cfg, std::size_t train_rows, std::size_t full_rows) {
    if (cfg.gan_rows > 0) return cfg.gan_rows;
    return full_rows > train_rows ? full_rows - train_rows : train_rows;
}

std::pair<Matrix, std::vector<double>> split_target(const Matrix& rows) {
    const std::size_t p = rows.cols() - 1;
    Matrix X(rows.rows(), p);
    std::vector<double> y(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        for (std::size_t c = 0; c < p; ++c) X(r, c) = rows(r, c);
        y[r] = rows(r, p);
    }
    return {std::move(X), std::move(y)};
}

}  // namespace

// ---- stages -------------------------------------------------------------

StageReport run_validate(const RunConfig& cfg) {
    require_path(cfg.survey, "survey file");
    const auto matrix = with_file(cfg.survey, [&] { return delphi::parse_survey(io::read_file(cfg.survey.string())); });
    const auto report = delphi::compute_scale_cvi(matrix, cfg.agreement_threshold);
    return {"validate", delphi::format_report(report), delphi::to_json(report), {}};
}

StageReport run_bwm(const RunConfig& cfg) {
    const auto g = solve_group(cfg.bwm_dir, cfg);
    return {"bwm", group_text(g, cfg), group_json(g, cfg), {}};
}

StageReport run_hierarchy(const RunConfig& cfg) {
    const fs::path dims_path = cfg.dims.empty() ? cfg.bwm_dir : cfg.dims;
    require_path(dims_path, "dimension weights");
    require_path(cfg.locals, "local weights directory");
    const auto dims = load_weights(dims_path, cfg);
    std::vector<group::LabeledWeights> locals;
    for (const auto& code : dims.codes) {
        const auto sub = cfg.locals / code;
        const auto file = cfg.locals / (code + ".json");
        if (fs::is_directory(sub)) {
            locals.push_back(load_weights(sub, cfg));
        } else if (fs::exists(file)) {
            locals.push_back(load_weights(file, cfg));
        } else {
            fail(ErrorKind::data, "no local weights for dimension '" + code + "' under '" + cfg.locals.string() + "'");
        }
    }
    const auto h = group::compute_global_weights(dims, locals);
    return {"hierarchy", group::format_hierarchy(h), group::to_json(h), {}};
}

StageReport run_synth(const RunConfig& cfg) {
    Matrix raw;
    std::size_t full = 0;
    std::string source;
    const auto enc = encoding(cfg);
    if (!cfg.train.empty()) {
        require_path(cfg.train, "training file");
        const auto ds = with_file(cfg.train, [&] { return fire::load_dataset(cfg.train.string()); });
        raw = with_target(fire::feature_matrix(ds, enc), fire::targets(ds, transform(cfg)));
        full = ds.size();
        source = cfg.train.filename().string();
    } else {
        const auto p = prepare(cfg);
        raw = with_target(fire::feature_matrix(p.split.train, enc), fire::targets(p.split.train, transform(cfg)));
        full = p.dataset.size();
        source = p.path.filename().string() + " (training split)";
    }
    const auto s = synthesize(raw, synthetic_count(cfg, raw.rows(), full), cfg);

    auto header = fire::feature_names(enc);
    header.push_back(cfg.log_target ? "log1p_area" : "area");

    std::vector<double> real_mean(raw.cols(), 0.0);
    std::vector<double> synth_mean(raw.cols(), 0.0);
    const std::size_t n_real = s.augmented.original_count;
    const std::size_t n_synth = s.augmented.rows.rows() - n_real;
    for (std::size_t r = 0; r < s.augmented.rows.rows(); ++r) {
        auto& acc = r < n_real ? real_mean : synth_mean;
        for (std::size_t c = 0; c < raw.cols(); ++c) acc[c] += s.augmented.rows(r, c);
    }
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        real_mean[c] /= static_cast<double>(std::max<std::size_t>(n_real, 1));
        synth_mean[c] /= static_cast<double>(std::max<std::size_t>(n_synth, 1));
    }

    std::ostringstream text;
    text << "Synthetic rows from " << source << "\n";
    text << "real rows " << n_real << ", synthetic rows " << n_synth << ", epochs " << cfg.gan.epochs << "\n";
    if (!s.generator.history.empty()) {
        const auto& last = s.generator.history.back();
        text << "final D objective " << io::format_fixed(last.discriminator_objective, 4) << ", G loss "
             << io::format_fixed(last.generator_loss, 4) << "\n";
    }
    text << "\n" << pad("column", 12) << pad("real mean", 14) << "synthetic mean\n";
    for (std::size_t c = 0; c < header.size(); ++c) {
        text << pad(header[c], 12) << pad(io::format_fixed(real_mean[c], 4), 14)
             << (n_synth > 0 ? io::format_fixed(synth_mean[c], 4) : std::string("-")) << '\n';
    }

    json result{{"source", source},
                {"columns", header},
                {"real_rows", n_real},
                {"synthetic_rows", n_synth},
                {"real_mean", real_mean},
                {"synthetic_mean", synth_mean},
                {"generator", gan::to_json(s.generator)}};
    return {"synth", text.str(), std::move(result),
            {{"synthetic.csv", gan::to_csv(s.augmented, header)}, {"gan_history.csv", gan::history_csv(s.generator)}}};
}

StageReport run_predict(const RunConfig& cfg) {
    const auto p = prepare(cfg);
    const auto enc = encoding(cfg);
    const auto tt = transform(cfg);
    const Matrix X_train = fire::feature_matrix(p.split.train, enc);
    const Matrix X_test = fire::feature_matrix(p.split.test, enc);
    const auto y_train = fire::targets(p.split.train, tt);
    const auto y_test = fire::targets(p.split.test, tt);

    const auto scaler = fire::fit_scaler(X_train, cfg.z_score ? fire::ScalingMode::z_score : fire::ScalingMode::min_max);
    ml::TrainingSet train{scaler.transform(X_train), y_train};
    ml::TrainingSet test{scaler.transform(X_test), y_test};

    std::optional<ml::TrainingSet> augmented;
    if (cfg.with_gan) {
        const auto s = synthesize(with_target(X_train, y_train), synthetic_count(cfg, X_train.rows(), p.dataset.size()), cfg);
        auto [X_aug, y_aug] = split_target(s.augmented.rows);
        augmented = ml::TrainingSet{scaler.transform(X_aug), std::move(y_aug)};
    }

    std::vector<ml::ModelSpec> specs;
    for (const auto& name : cfg.models) specs.push_back(ml::model_preset(name, cfg.seed));
    const auto report = ml::benchmark(specs, train, test, augmented, fire::feature_names(enc), cfg.execution);

    std::ostringstream text;
    text << "Dataset " << p.path.filename().string() << ": " << p.dataset.size() << " rows, " << p.split.train.size()
         << " train / " << p.split.test.size() << " test\n";
    text << "target " << (cfg.log_target ? "log1p(area)" : "area")
         << (cfg.with_gan ? ", training set augmented with " + std::to_string(augmented->y.size() - train.y.size()) +
                                " synthetic rows"
                          : std::string())
         << "\n\n";
    text << ml::format_report(report);

    auto result = ml::to_json(report);
    result["dataset"] = {{"file", p.path.filename().string()},
                         {"rows", p.dataset.size()},
                         {"train_rows", p.split.train.size()},
                         {"test_rows", p.split.test.size()}};
    result["target"] = cfg.log_target ? "log1p(area)" : "area";
    result["with_gan"] = cfg.with_gan;
    return {"predict", text.str(), std::move(result), {}};
}

// ---- orchestration ------------------------------------------------------

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
}

std::string header_text(const StageReport& r, const std::string& hash, std::uint64_t seed) {
    std::ostringstream out;
    out << "# exwa " << kVersion << "\n# stage: " << r.stage << "\n# config-hash: " << hash << "\n# seed: " << seed
        << "\n\n";
    return out.str();
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    fs::path staging;
    try {
        const auto hash = config_hash(cfg);
        std::vector<StageReport> reports;
        auto stage = [&](StageReport (*fn)(const RunConfig&)) {
            reports.push_back(fn(cfg));
            log << "[" << reports.back().stage << "] done\n";
        };
        switch (cfg.command) {
            case Command::validate: stage(run_validate); break;
            case Command::bwm: stage(run_bwm); break;
            case Command::hierarchy: stage(run_hierarchy); break;
            case Command::synth: stage(run_synth); break;
            case Command::predict: stage(run_predict); break;
            case Command::all:
                stage(run_validate);
                stage(run_bwm);
                stage(run_hierarchy);
                stage(run_synth);
                stage(run_predict);
                break;
        }

        fs::create_directories(cfg.output_dir);
        staging = cfg.output_dir / (".staging-" + to_string(cfg.command));
        fs::remove_all(staging);
        for (const auto& r : reports) {
            const auto dir = staging / r.stage;
            fs::create_directories(dir);
            json doc{{"tool", "exwa"},
                     {"version", kVersion},
                     {"stage", r.stage},
                     {"config_hash", hash},
                     {"seed", cfg.seed},
                     {"result", r.result}};
            write_file(dir / "report.txt", header_text(r, hash, cfg.seed) + r.text);
            write_file(dir / "report.json", doc.dump(2) + "\n");
            for (const auto& [name, content] : r.extra_files) write_file(dir / name, content);
        }
        for (const auto& r : reports) {
            const auto target = cfg.output_dir / r.stage;
            fs::remove_all(target);
            fs::rename(staging / r.stage, target);
            log << "wrote " << target.string() << "\n";
        }
        fs::remove_all(staging);
        return 0;
    } catch (const Error& e) {
        if (!staging.empty()) {
            std::error_code ec;
            fs::remove_all(staging, ec);
        }
        err << e.what() << "\n";
        return is_numerical(e.kind()) ? 2 : 1;
    } catch (const fs::filesystem_error& e) {
        err << "error (io): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace exwa::pipeline
