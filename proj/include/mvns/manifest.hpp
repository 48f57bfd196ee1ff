#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mvns/experiments.hpp"

namespace mvns {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AssumptionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A manifest fully determines a run: normalized configuration (defaults
// filled), validated model, embedded ledger and a content hash over every
// field including the tool version.
struct RunManifest {
    GridSpec grid;
    ModelParams params;
    Symbol symbol;
    ExperimentSizing sizing;
    std::string kind;

    double radius_sq = 10.0;
    double radius_4 = 100.0;
    StabilityKnobs stability;
    TranslationKnobs translation;
    AbsorbingKnobs absorbing;
    AttractorKnobs attractor;
    std::vector<double> snapshot_times;

    ConstantLedger ledger;
    AssumptionReport assumptions;
    nlohmann::json normalized;
    std::string content_hash;
    std::string version;
};

// Parses, fills defaults, validates the model, runs the sampled assumption
// checker and computes the ledger. Throws ConfigError for malformed input and
// AssumptionError when the sampled checker fails (naming the first violated
// bound).
RunManifest parse_config(const std::filesystem::path& path);
RunManifest parse_config_json(const nlohmann::json& doc);

// Built-in defaults: the dissipative tanh family on an N=8 grid.
nlohmann::json default_config();

uint64_t fnv1a64(const std::string& bytes);

} // namespace mvns
