#include "exwa/error.hpp"
#include "exwa/pipeline/run.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace exwa;

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool serial = false;

    std::string survey;
    std::optional<double> threshold;
    std::string dir;
    std::string aggregate;
    std::string dims;
    std::string locals;
    std::string train;
    std::optional<std::size_t> rows;
    std::optional<std::size_t> epochs;
    std::string data;
    bool with_gan = false;
    std::string models;
    std::optional<double> test_fraction;
    bool log_target = false;
    bool one_hot = false;
    bool z_score = false;
};

void common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file; flags override it");
    sub->add_option("--out", f.out, "output directory (default out, or $EXWA_OUTPUT_DIR)");
    sub->add_option("--seed", f.seed, "random seed (default 42)");
    sub->add_flag("--serial", f.serial, "run parallel kernels serially");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

pipeline::RunConfig build(const std::string& command, const Flags& f) {
    pipeline::RunConfig cfg;
    if (!f.config.empty()) cfg = pipeline::load_config(f.config);
    cfg.command = pipeline::parse_command(command);
    if (const char* env = std::getenv(pipeline::kOutputDirEnv); env != nullptr && *env != '\0') cfg.output_dir = env;
    if (!f.out.empty()) cfg.output_dir = f.out;
    if (f.seed) cfg.seed = *f.seed;
    if (f.serial) cfg.execution = Execution::serial;
    if (!f.survey.empty()) cfg.survey = f.survey;
    if (f.threshold) cfg.agreement_threshold = *f.threshold;
    if (!f.dir.empty()) cfg.bwm_dir = f.dir;
    if (!f.aggregate.empty()) cfg.aggregation = group::parse_aggregation(f.aggregate);
    if (!f.dims.empty()) cfg.dims = f.dims;
    if (!f.locals.empty()) cfg.locals = f.locals;
    if (!f.train.empty()) cfg.train = f.train;
    if (f.rows) cfg.gan_rows = *f.rows;
    if (f.epochs) cfg.gan.epochs = *f.epochs;
    if (!f.data.empty()) cfg.data = f.data;
    if (f.with_gan) cfg.with_gan = true;
    if (!f.models.empty()) cfg.models = split_list(f.models);
    if (f.test_fraction) cfg.test_fraction = *f.test_fraction;
    if (f.log_target) cfg.log_target = true;
    if (f.one_hot) cfg.one_hot_calendar = true;
    if (f.z_score) cfg.z_score = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expert-weighted attribute analysis and burned-area prediction"};
    app.set_version_flag("--version", std::string(pipeline::kVersion));
    app.require_subcommand(1);
    Flags f;

    auto* validate = app.add_subcommand("validate", "content-validity indices for a survey");
    common(validate, f);
    validate->add_option("--survey", f.survey, "survey CSV (items x experts, ratings 1-4)");
    validate->add_option("--threshold", f.threshold, "agreement proportion (default 0.778)");

    auto* bwm = app.add_subcommand("bwm", "Best-Worst weights for a directory of decision-maker files");
    common(bwm, f);
    bwm->add_option("--dir", f.dir, "directory of decision-maker JSON files");
    bwm->add_option("--aggregate", f.aggregate, "arithmetic or geometric");

    auto* hierarchy = app.add_subcommand("hierarchy", "global weights for the dimension/attribute hierarchy");
    common(hierarchy, f);
    hierarchy->add_option("--dims", f.dims, "dimension DM directory or weights JSON");
    hierarchy->add_option("--locals", f.locals, "directory of <DIM>/ subdirectories or <DIM>.json files");
    hierarchy->add_option("--aggregate", f.aggregate, "arithmetic or geometric");

    auto* synth = app.add_subcommand("synth", "train the tabular GAN and sample synthetic rows");
    common(synth, f);
    synth->add_option("--train", f.train, "training rows in the forest-fire CSV layout");
    synth->add_option("--data", f.data, "dataset to split when --train is not given");
    synth->add_option("--rows", f.rows, "synthetic rows to draw (0: restore the dataset size)");
    synth->add_option("--epochs", f.epochs, "GAN training epochs");

    auto* predict = app.add_subcommand("predict", "train and score the regression models");
    common(predict, f);
    predict->add_option("--data", f.data, "forest-fire CSV");
    predict->add_flag("--with-gan", f.with_gan, "also train on GAN-augmented rows");
    predict->add_option("--models", f.models, "comma list of nn200,nn100,linear,rf,xgb,svr");
    predict->add_option("--test-fraction", f.test_fraction, "share of rows held out (default 0.6)");
    predict->add_option("--rows", f.rows, "synthetic rows for augmentation");
    predict->add_option("--epochs", f.epochs, "GAN training epochs");
    predict->add_flag("--log-target", f.log_target, "fit log1p(area)");
    predict->add_flag("--one-hot-calendar", f.one_hot, "one-hot month and day");
    predict->add_flag("--z-score", f.z_score, "standardise features instead of min-max");

    auto* all = app.add_subcommand("all", "validate, bwm, hierarchy, synth and predict in sequence");
    common(all, f);
    all->add_option("--data", f.data, "forest-fire CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto* sub = app.get_subcommands().front();
        const auto cfg = build(sub->get_name(), f);
        return pipeline::run(cfg, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return is_numerical(e.kind()) ? 2 : 1;
    }
}
