#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ate/analysis.hpp"
#include "ate/capmodel.hpp"
#include "ate/covmodel.hpp"
#include "ate/ingest.hpp"
#include "ate/report.hpp"
#include "ate/scoring.hpp"

namespace ate {

// Resolved run configuration. Precedence: shipped defaults < config file <
// command-line flags (the ATE_OUTPUT_DIR environment variable sits between
// config file and flags, for the output directory only).
struct RunConfig {
    std::string data_dir;   // shipped parameter files; defaults to the build-time path
    std::string output_dir = "out";

    struct Paths {
        // Empty string = not configured. Data inputs have no shipped default;
        // parameter files fall back to the data_dir copies.
        std::string tasks;
        std::string profiles;
        std::string employment;
        std::string titles;
        std::string ability_map;
        std::string modifier_rules;
        std::string rubric;
        std::string semantic_rubric;
        std::string telework;
        std::string tier_shares;
        std::string tier_params;
        std::string regions;
        std::string group_labels;
        std::string annotations;
        std::string scenarios;
        std::string reinstatement;
        std::map<std::string, std::string> external_indices; // name -> path
    } paths;

    TaskColumnMap task_schema;
    ProfileColumnMap profile_schema;
    EmploymentColumnMap employment_schema;

    struct Fixture {
        bool enabled = false;
        std::uint64_t seed = 1;
        int n_occupations = 10;
        int tasks_per_occ = 8;
    } fixture;

    VelocityMode velocity_mode = VelocityMode::Residence;
    RiskThresholds risk_thresholds;
    double share_threshold = 0.35;
    UnmappedAbilityPolicy unmapped_policy = UnmappedAbilityPolicy::DropAndRenormalize;
    unsigned parallelism = 0;                       // 0 = machine-detected
    std::vector<double> grid_taus = {2025, 2026, 2027, 2030};
    std::vector<double> report_taus = {2025, 2027, 2030}; // top-N columns
    std::vector<double> shares_taus = {2027, 2030};       // regional shares panels
    double remote_delta_tau = 2027;
    std::size_t top_n = 20;
    std::vector<int> stress_years = {2025, 2027, 2030};

    // Optional parameter overrides (config file / flags on top of data files).
    std::optional<TierSet> tier_params_override;

    std::string resolved_path(const std::string& configured, const std::string& data_file) const;
};

// Build-time default for the shipped data directory.
std::string default_data_dir();

RunConfig default_config();

// Applies a JSON config file on top of `cfg`. Unknown keys are errors (they
// are almost always typos). Throws ate::Error with the offending field name.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Applies the ATE_OUTPUT_DIR environment override.
void apply_env(RunConfig& cfg);

// Everything cmd_score/analyze/report need, loaded and validated.
struct LoadedInputs {
    Dataset data;
    AbilityMap ability_map;
    std::vector<TextModifierRule> modifier_rules;
    CovRubric rubric;
    CovRubric semantic_rubric;
    ScoreModel model;
    std::vector<ScenarioSpec> scenarios;
    std::vector<ReinstatementScenario> reinstatement;
    std::map<std::string, Annotation> annotations;
    std::map<std::string, std::string> group_labels;
    std::string ledger_version;
    std::vector<std::pair<std::string, std::string>> input_digests; // (name, digest)
};

// Loads parameter files (not the task corpus; see pipeline cmd_ingest for
// data flow). Missing configured paths are fatal errors naming the field.
LoadedInputs load_parameters(const RunConfig& cfg);

std::string ledger_version(const std::string& data_dir);

} // namespace ate
