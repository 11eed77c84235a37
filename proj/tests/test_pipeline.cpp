#include <catch_amalgamated.hpp>

#include "exwa/error.hpp"
#include "exwa/io/csv.hpp"
#include "exwa/pipeline/config.hpp"
#include "exwa/pipeline/run.hpp"
#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <sys/wait.h>

using namespace exwa;
using namespace exwa::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("exwa_pipeline_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

RunConfig default_config(Command c, const fs::path& out) {
    auto cfg = load_config(testing::source_path("data/default_config.json"));
    cfg.command = c;
    cfg.output_dir = out;
    return cfg;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = io::read_file(e.path().string());
    }
    return files;
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args) {
    const char* exe = std::getenv("EXWA_CLI");
    REQUIRE(exe != nullptr);
    const auto dir = fs::temp_directory_path();
    const auto out = dir / "exwa_cli_stdout.txt";
    const auto err = dir / "exwa_cli_stderr.txt";
    const std::string cmd = std::string(exe) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = io::read_file(out.string());
    r.err = io::read_file(err.string());
    return r;
}

}  // namespace

TEST_CASE("validate stage flags the two weak items") {
    const auto out = scratch("validate");
    std::ostringstream log, err;
    REQUIRE(run(default_config(Command::validate, out), log, err) == 0);
    const auto doc = nlohmann::json::parse(io::read_file((out / "validate" / "report.json").string()));
    CHECK(doc["stage"] == "validate");
    CHECK(doc["seed"] == 42);
    std::vector<std::string> invalid;
    for (const auto& item : doc["result"]["per_item"]) {
        if (!item["valid"].get<bool>()) invalid.push_back(item["item"]);
    }
    CHECK(invalid == std::vector<std::string>{"Personalization of task", "Enhances user experience"});
    const auto text = io::read_file((out / "validate" / "report.txt").string());
    CHECK(text.rfind("# exwa ", 0) == 0);
    CHECK(text.find("# config-hash: ") != std::string::npos);
}

TEST_CASE("bwm and hierarchy stages produce simplex weights") {
    const auto out = scratch("hierarchy");
    std::ostringstream log, err;
    REQUIRE(run(default_config(Command::hierarchy, out), log, err) == 0);
    const auto doc = nlohmann::json::parse(io::read_file((out / "hierarchy" / "report.json").string()));
    double total = 0.0;
    std::size_t attributes = 0;
    for (const auto& d : doc["result"]["dimensions"]) {
        for (const auto& a : d["attributes"]) {
            total += a["global_weight"].get<double>();
            ++attributes;
        }
    }
    CHECK(attributes == 13);
    CHECK(std::abs(total - 1.0) < 1e-9);

    const auto out2 = scratch("bwm");
    REQUIRE(run(default_config(Command::bwm, out2), log, err) == 0);
    CHECK(fs::exists(out2 / "bwm" / "report.txt"));
}

TEST_CASE("empty decision-maker directory is an input error") {
    const auto out = scratch("empty_out");
    const auto empty = scratch("empty_dms");
    auto cfg = default_config(Command::bwm, out);
    cfg.bwm_dir = empty;
    std::ostringstream log, err;
    CHECK(run(cfg, log, err) == 1);
    CHECK(err.str().find("no decision-maker files found") != std::string::npos);
    CHECK_FALSE(fs::exists(out / "bwm"));
}

TEST_CASE("failed runs leave no partial output") {
    const auto out = scratch("partial");
    auto cfg = default_config(Command::all, out);
    cfg.data = out / "missing.csv";
    std::ostringstream log, err;
    CHECK(run(cfg, log, err) == 1);
    CHECK_FALSE(fs::exists(out / "validate"));
    CHECK_FALSE(fs::exists(out / "predict"));
}

TEST_CASE("full pipeline is deterministic and independent of execution mode") {
    const auto a = scratch("all_a");
    const auto b = scratch("all_b");
    const auto c = scratch("all_serial");
    std::ostringstream log, err;
    REQUIRE(run(default_config(Command::all, a), log, err) == 0);
    REQUIRE(run(default_config(Command::all, b), log, err) == 0);
    auto serial = default_config(Command::all, c);
    serial.execution = Execution::serial;
    REQUIRE(run(serial, log, err) == 0);
    const auto ta = read_tree(a);
    CHECK(ta.size() >= 10);
    CHECK(ta == read_tree(b));
    CHECK(ta == read_tree(c));
    for (const char* stage : {"validate", "bwm", "hierarchy", "synth", "predict"}) {
        CHECK(ta.count(std::string(stage) + "/report.json") == 1);
    }
    CHECK(ta.count("synth/synthetic.csv") == 1);

    // a stage run on its own matches the same stage inside `all`
    const auto solo = scratch("solo_predict");
    REQUIRE(run(default_config(Command::predict, solo), log, err) == 0);
    CHECK(read_tree(solo).at("predict/report.json") == ta.at("predict/report.json"));
}

TEST_CASE("config loading") {
    const auto dir = scratch("config");
    const auto path = dir / "c.json";
    std::ofstream(path) << R"({"seed": 7, "predict": {"models": ["linear"]}, "gan": {"epochs": 3}})";
    const auto cfg = load_config(path);
    CHECK(cfg.seed == 7);
    CHECK(cfg.models == std::vector<std::string>{"linear"});
    CHECK(cfg.gan.epochs == 3);
    CHECK(cfg.config_dir == fs::absolute(dir));

    std::ofstream(path) << R"({"sead": 7})";
    try {
        load_config(path);
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
        CHECK(std::string(e.what()).find("sead") != std::string::npos);
    }
    std::ofstream(path) << R"({"seed": "seven"})";
    CHECK_THROWS_AS(load_config(path), Error);
    std::ofstream(path) << "{";
    CHECK_THROWS_AS(load_config(path), Error);

    auto a = default_config(Command::validate, "x");
    auto b = default_config(Command::predict, "y");
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 43;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("command line interface") {
    auto r = run_cli("--version");
    CHECK(r.code == 0);
    CHECK(r.out.find(kVersion) != std::string::npos);

    r = run_cli("frobnicate");
    CHECK(r.code == 1);
    r = run_cli("validate --no-such-flag");
    CHECK(r.code == 1);

    const auto out = scratch("cli_validate");
    r = run_cli("validate --survey " + testing::source_path("data/expert_survey.csv") + " --out " + out.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(out / "validate" / "report.json"));

    const auto empty = scratch("cli_empty");
    r = run_cli("bwm --dir " + empty.string() + " --out " + out.string());
    CHECK(r.code == 1);
    CHECK(r.err.find("no decision-maker files found") != std::string::npos);

    const auto bad = scratch("cli_bad") / "survey.csv";
    std::ofstream(bad) << "Roles,E1,E2\nItem,3,7\n";
    r = run_cli("validate --survey " + bad.string() + " --out " + out.string());
    CHECK(r.code == 1);
    CHECK(r.err.find("survey.csv") != std::string::npos);
    CHECK(r.err.find("E2") != std::string::npos);
}
