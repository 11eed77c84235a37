#pragma once

#include "exwa/pipeline/config.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace exwa::pipeline {

struct StageReport {
    std::string stage;
    std::string text;
    nlohmann::json result;
    std::vector<std::pair<std::string, std::string>> extra_files;  // name, content
};

StageReport run_validate(const RunConfig& cfg);
StageReport run_bwm(const RunConfig& cfg);
StageReport run_hierarchy(const RunConfig& cfg);
StageReport run_synth(const RunConfig& cfg);
StageReport run_predict(const RunConfig& cfg);

/// Runs the configured command and writes <output>/<stage>/report.{txt,json}.
/// Files are staged and moved into place only when every stage succeeds.
/// Returns 0, 1 for input errors, 2 for numerical failures.
int run(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace exwa::pipeline
