#pragma once

#include "hypermatch/substrates.hpp"

#include "json.hpp"

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace hm {

using Json = nlohmann::json;

// A parsed configuration: top-level name, seed and stage list plus one table
// per stage holding its parameters.
struct ExperimentConfig {
    std::string name = "experiment";
    std::uint64_t seed = 0;
    std::vector<std::string> stages;
    Json doc = Json::object();  // the whole normalised document
};

// TOML via the CLI11 config reader; scalars that parse as integers or
// booleans become numbers or booleans, everything else stays a string.
ExperimentConfig parse_toml_config(std::istream& in);
ExperimentConfig parse_json_config(std::istream& in);
// Dispatches on the extension (.json, otherwise TOML). Throws on unknown
// stages or a missing file.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const Json& doc);

const std::vector<std::string>& known_stages();

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

struct StageOutcome {
    std::string name;
    std::uint64_t seed = 0;
    std::string status;  // ok | failed | obstruction
    std::string message;
    std::vector<std::string> files;  // relative to the bundle root
};

struct BundleResult {
    std::string dir;
    bool partial = false;
    std::vector<StageOutcome> stages;
    int exit_code = 0;  // 0 ok, 2 some stage failed, 3 obstruction only
};

// Runs every stage into out_dir/<stage>/ with a fixed pool of jobs workers,
// then writes out_dir/manifest.json with file hashes. Stage exceptions are
// isolated: the stage is marked failed and the bundle partial.
BundleResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int jobs = 1);

struct VerifyReport {
    bool ok = false;
    bool structural_ok = true;
    std::vector<std::string> problems;
};

// Re-runs the validators on the stored artefacts; no solution is recomputed.
VerifyReport verify_bundle(const std::string& dir);

// Shared parsing helpers for the CLI.
FiniteGroup group_by_name(const std::string& name);
std::vector<CayleyGenerator> parse_generators(const std::string& text);  // "1:0,-1:0,0:1"

}  // namespace hm
