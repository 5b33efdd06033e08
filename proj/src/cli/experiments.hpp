#pragma once

#include "config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cfdual::cli {

struct Verdict {
    std::string name;
    bool pass = true;
    double residual = 0.0;
    double tolerance = 0.0;
    Point point;  // empty when no sample attains the residual
    std::string note;
};

struct ExperimentResult {
    std::vector<Verdict> verdicts;
    nlohmann::json details = nlohmann::json::object();
    std::vector<nlohmann::json> export_lines;
    std::size_t sample_count = 0;

    bool passed() const;
};

/// Dispatches on the experiment kind. Library errors raised while evaluating
/// (domain, degenerate metric, precondition) become a failing "evaluation"
/// verdict; a config that is inconsistent with the geometry throws ConfigError.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

} // namespace cfdual::cli
