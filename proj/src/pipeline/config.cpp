#include "exwa/pipeline/config.hpp"

#include "exwa/error.hpp"
#include "exwa/io/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace exwa::pipeline {

namespace fs = std::filesystem;

Command parse_command(const std::string& name) {
    if (name == "validate") return Command::validate;
    if (name == "bwm") return Command::bwm;
    if (name == "hierarchy") return Command::hierarchy;
    if (name == "synth") return Command::synth;
    if (name == "predict") return Command::predict;
    if (name == "all") return Command::all;
    fail(ErrorKind::usage, "unknown command '" + name + "'");
}

std::string to_string(Command c) {
    switch (c) {
        case Command::validate: return "validate";
        case Command::bwm: return "bwm";
        case Command::hierarchy: return "hierarchy";
        case Command::synth: return "synth";
        case Command::predict: return "predict";
        case Command::all: return "all";
    }
    return "unknown";
}

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(ErrorKind::config, where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            fail(ErrorKind::config, "unknown config key '" + where + "." + key + "'");
        }
    }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::config, "config key '" + where + "." + key + "' has the wrong type");
    }
}

fs::path get_path(const json& obj, const char* key, const std::string& where, const fs::path& base, fs::path fallback) {
    const auto s = get<std::string>(obj, key, where, {});
    if (s.empty()) return fallback;
    const fs::path p(s);
    return p.is_absolute() ? p : base / p;
}

}  // namespace

RunConfig load_config(const fs::path& file, RunConfig cfg) {
    json doc;
    try {
        doc = json::parse(io::read_file(file.string()));
    } catch (const json::parse_error& e) {
        fail(ErrorKind::config, file.string() + ": invalid JSON: " + e.what());
    }
    const fs::path base = fs::absolute(file).parent_path();
    cfg.config_dir = base;
    check_keys(doc, "config", {"seed", "output_dir", "validate", "bwm", "hierarchy", "data", "predict", "gan", "parallel"});

    cfg.seed = get<std::uint64_t>(doc, "seed", "config", cfg.seed);
    cfg.output_dir = get_path(doc, "output_dir", "config", base, cfg.output_dir);
    cfg.data = get_path(doc, "data", "config", base, cfg.data);
    cfg.execution = get<bool>(doc, "parallel", "config", true) ? Execution::parallel : Execution::serial;

    if (doc.contains("validate")) {
        const auto& v = doc["validate"];
        check_keys(v, "validate", {"survey", "threshold"});
        cfg.survey = get_path(v, "survey", "validate", base, cfg.survey);
        cfg.agreement_threshold = get<double>(v, "threshold", "validate", cfg.agreement_threshold);
    }
    if (doc.contains("bwm")) {
        const auto& v = doc["bwm"];
        check_keys(v, "bwm", {"dir", "aggregate"});
        cfg.bwm_dir = get_path(v, "dir", "bwm", base, cfg.bwm_dir);
        if (v.contains("aggregate")) cfg.aggregation = group::parse_aggregation(get<std::string>(v, "aggregate", "bwm", {}));
    }
    if (doc.contains("hierarchy")) {
        const auto& v = doc["hierarchy"];
        check_keys(v, "hierarchy", {"dims", "locals"});
        cfg.dims = get_path(v, "dims", "hierarchy", base, cfg.dims);
        cfg.locals = get_path(v, "locals", "hierarchy", base, cfg.locals);
    }
    if (doc.contains("predict")) {
        const auto& v = doc["predict"];
        check_keys(v, "predict", {"test_fraction", "models", "with_gan", "log_target", "one_hot_calendar", "z_score"});
        cfg.test_fraction = get<double>(v, "test_fraction", "predict", cfg.test_fraction);
        cfg.models = get<std::vector<std::string>>(v, "models", "predict", cfg.models);
        cfg.with_gan = get<bool>(v, "with_gan", "predict", cfg.with_gan);
        cfg.log_target = get<bool>(v, "log_target", "predict", cfg.log_target);
        cfg.one_hot_calendar = get<bool>(v, "one_hot_calendar", "predict", cfg.one_hot_calendar);
        cfg.z_score = get<bool>(v, "z_score", "predict", cfg.z_score);
    }
    if (doc.contains("gan")) {
        const auto& v = doc["gan"];
        check_keys(v, "gan", {"noise_dim", "generator_hidden", "discriminator_hidden", "learning_rate", "epochs",
                              "batch_size", "clip_epsilon", "rows"});
        auto& g = cfg.gan;
        g.noise_dim = get<std::size_t>(v, "noise_dim", "gan", g.noise_dim);
        g.generator_hidden = get<std::size_t>(v, "generator_hidden", "gan", g.generator_hidden);
        g.discriminator_hidden = get<std::size_t>(v, "discriminator_hidden", "gan", g.discriminator_hidden);
        g.learning_rate = get<double>(v, "learning_rate", "gan", g.learning_rate);
        g.epochs = get<std::size_t>(v, "epochs", "gan", g.epochs);
        g.batch_size = get<std::size_t>(v, "batch_size", "gan", g.batch_size);
        g.clip_epsilon = get<double>(v, "clip_epsilon", "gan", g.clip_epsilon);
        cfg.gan_rows = get<std::size_t>(v, "rows", "gan", cfg.gan_rows);
    }
    return cfg;
}

nlohmann::json settings_json(const RunConfig& cfg) {
    return {{"seed", cfg.seed},
            {"agreement_threshold", cfg.agreement_threshold},
            {"aggregation", group::to_string(cfg.aggregation)},
            {"test_fraction", cfg.test_fraction},
            {"models", cfg.models},
            {"with_gan", cfg.with_gan},
            {"log_target", cfg.log_target},
            {"one_hot_calendar", cfg.one_hot_calendar},
            {"z_score", cfg.z_score},
            {"gan",
             {{"noise_dim", cfg.gan.noise_dim},
              {"generator_hidden", cfg.gan.generator_hidden},
              {"discriminator_hidden", cfg.gan.discriminator_hidden},
              {"learning_rate", cfg.gan.learning_rate},
              {"epochs", cfg.gan.epochs},
              {"batch_size", cfg.gan.batch_size},
              {"clip_epsilon", cfg.gan.clip_epsilon},
              {"rows", cfg.gan_rows}}}};
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::uint64_t hash_input(const fs::path& p, std::uint64_t h) {
    if (p.empty() || !fs::exists(p)) return fnv1a64("<none>", h);
    if (fs::is_directory(p)) {
        std::vector<fs::path> entries;
        for (const auto& e : fs::recursive_directory_iterator(p)) {
            if (e.is_regular_file()) entries.push_back(e.path());
        }
        std::sort(entries.begin(), entries.end());
        for (const auto& e : entries) {
            h = fnv1a64(fs::relative(e, p).generic_string(), h);
            h = fnv1a64(io::read_file(e.string()), h);
        }
        return h;
    }
    return fnv1a64(io::read_file(p.string()), h);
}

}  // namespace

std::string config_hash(const RunConfig& cfg) {
    // Every configured input counts, whatever the command, so a stage run on
    // its own carries the same header as the same stage inside `all`.
    std::uint64_t h = fnv1a64(settings_json(cfg).dump());
    h = hash_input(cfg.survey, h);
    h = hash_input(cfg.bwm_dir, h);
    h = hash_input(cfg.dims.empty() ? cfg.bwm_dir : cfg.dims, h);
    h = hash_input(cfg.locals, h);
    h = hash_input(cfg.train, h);
    fs::path dataset;
    try {
        dataset = resolve_dataset(cfg);
    } catch (const Error&) {
        // commands that never read the dataset do not need one
    }
    h = hash_input(dataset, h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

fs::path resolve_dataset(const RunConfig& cfg) {
    if (!cfg.data.empty()) return cfg.data;
    if (const char* env = std::getenv(kDatasetEnv); env != nullptr && *env != '\0') return env;
    std::vector<fs::path> dirs;
    if (!cfg.config_dir.empty()) dirs.push_back(cfg.config_dir);
    dirs.emplace_back("data");
    for (const char* name : {"forestfires.csv", "forestfires_standin.csv"}) {
        for (const auto& d : dirs) {
            if (fs::exists(d / name)) return d / name;
        }
    }
    fail(ErrorKind::io, "no forest-fire dataset found: pass --data, set " + std::string(kDatasetEnv) +
                            ", or place forestfires.csv under data/");
}

}  // namespace exwa::pipeline
