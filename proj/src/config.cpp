#include "ate/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ate/error.hpp"
#include "ate/text.hpp"

#include <json.hpp>

#ifndef ATE_DATA_DIR
#define ATE_DATA_DIR "data"
#endif

namespace ate {

namespace fs = std::filesystem;
using nlohmann::json;

std::string default_data_dir() { return ATE_DATA_DIR; }

RunConfig default_config() {
    RunConfig cfg;
    cfg.data_dir = default_data_dir();
    return cfg;
}

std::string RunConfig::resolved_path(const std::string& configured,
                                     const std::string& data_file) const {
    if (!configured.empty()) return configured;
    return (fs::path(data_dir) / data_file).string();
}

namespace {

void require_known_keys(const json& obj, std::initializer_list<const char*> known,
                        const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw Error("config: unknown key '" + where + it.key() + "'");
    }
}

std::string get_string(const json& obj, const char* key, const std::string& fallback,
                       const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) throw Error("config: '" + where + key + "' must be a string");
    return obj[key].get<std::string>();
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw Error("config: '" + where + key + "' must be a number");
    return obj[key].get<double>();
}

} // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("config: cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error("config: " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw Error("config: " + path + ": top level must be an object");

    require_known_keys(doc,
                       {"data_dir", "output_dir", "paths", "task_schema", "profile_schema",
                        "employment_schema", "fixture", "velocity_mode", "risk_thresholds",
                        "share_threshold", "unmapped_abilities", "parallelism", "grid_taus",
                        "report_taus", "shares_taus", "remote_delta_tau", "top_n", "stress_years",
                        "tier_params"},
                       "");

    cfg.data_dir = get_string(doc, "data_dir", cfg.data_dir, "");
    cfg.output_dir = get_string(doc, "output_dir", cfg.output_dir, "");

    if (doc.contains("paths")) {
        const json& p = doc["paths"];
        require_known_keys(p,
                           {"tasks", "profiles", "employment", "titles", "ability_map",
                            "modifier_rules", "rubric", "semantic_rubric", "telework",
                            "tier_shares", "tier_params", "regions", "group_labels", "annotations",
                            "scenarios", "reinstatement", "external_indices"},
                           "paths.");
        auto& out = cfg.paths;
        out.tasks = get_string(p, "tasks", out.tasks, "paths.");
        out.profiles = get_string(p, "profiles", out.profiles, "paths.");
        out.employment = get_string(p, "employment", out.employment, "paths.");
        out.titles = get_string(p, "titles", out.titles, "paths.");
        out.ability_map = get_string(p, "ability_map", out.ability_map, "paths.");
        out.modifier_rules = get_string(p, "modifier_rules", out.modifier_rules, "paths.");
        out.rubric = get_string(p, "rubric", out.rubric, "paths.");
        out.semantic_rubric = get_string(p, "semantic_rubric", out.semantic_rubric, "paths.");
        out.telework = get_string(p, "telework", out.telework, "paths.");
        out.tier_shares = get_string(p, "tier_shares", out.tier_shares, "paths.");
        out.tier_params = get_string(p, "tier_params", out.tier_params, "paths.");
        out.regions = get_string(p, "regions", out.regions, "paths.");
        out.group_labels = get_string(p, "group_labels", out.group_labels, "paths.");
        out.annotations = get_string(p, "annotations", out.annotations, "paths.");
        out.scenarios = get_string(p, "scenarios", out.scenarios, "paths.");
        out.reinstatement = get_string(p, "reinstatement", out.reinstatement, "paths.");
        if (p.contains("external_indices")) {
            if (!p["external_indices"].is_object())
                throw Error("config: 'paths.external_indices' must be an object");
            for (auto it = p["external_indices"].begin(); it != p["external_indices"].end(); ++it)
                out.external_indices[it.key()] = it.value().get<std::string>();
        }
    }

    auto apply_schema = [&](const char* key, auto&& assign) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_object()) throw Error(std::string("config: '") + key + "' must be an object");
        assign(doc[key]);
    };
    apply_schema("task_schema", [&](const json& s) {
        require_known_keys(s, {"soc", "id", "text", "importance", "relevance", "title"},
                           "task_schema.");
        cfg.task_schema.soc = get_string(s, "soc", cfg.task_schema.soc, "task_schema.");
        cfg.task_schema.id = get_string(s, "id", cfg.task_schema.id, "task_schema.");
        cfg.task_schema.text = get_string(s, "text", cfg.task_schema.text, "task_schema.");
        cfg.task_schema.importance =
            get_string(s, "importance", cfg.task_schema.importance, "task_schema.");
        cfg.task_schema.relevance =
            get_string(s, "relevance", cfg.task_schema.relevance, "task_schema.");
        cfg.task_schema.title = get_string(s, "title", cfg.task_schema.title, "task_schema.");
    });
    apply_schema("profile_schema", [&](const json& s) {
        require_known_keys(s, {"soc", "ability", "importance"}, "profile_schema.");
        cfg.profile_schema.soc = get_string(s, "soc", cfg.profile_schema.soc, "profile_schema.");
        cfg.profile_schema.ability =
            get_string(s, "ability", cfg.profile_schema.ability, "profile_schema.");
        cfg.profile_schema.importance =
            get_string(s, "importance", cfg.profile_schema.importance, "profile_schema.");
    });
    apply_schema("employment_schema", [&](const json& s) {
        require_known_keys(s, {"soc", "region", "employment"}, "employment_schema.");
        cfg.employment_schema.soc =
            get_string(s, "soc", cfg.employment_schema.soc, "employment_schema.");
        cfg.employment_schema.region =
            get_string(s, "region", cfg.employment_schema.region, "employment_schema.");
        cfg.employment_schema.employment =
            get_string(s, "employment", cfg.employment_schema.employment, "employment_schema.");
    });

    if (doc.contains("fixture")) {
        const json& f = doc["fixture"];
        require_known_keys(f, {"enabled", "seed", "n_occupations", "tasks_per_occ"}, "fixture.");
        if (f.contains("enabled")) cfg.fixture.enabled = f["enabled"].get<bool>();
        cfg.fixture.seed = static_cast<std::uint64_t>(
            get_number(f, "seed", static_cast<double>(cfg.fixture.seed), "fixture."));
        cfg.fixture.n_occupations = static_cast<int>(
            get_number(f, "n_occupations", cfg.fixture.n_occupations, "fixture."));
        cfg.fixture.tasks_per_occ = static_cast<int>(
            get_number(f, "tasks_per_occ", cfg.fixture.tasks_per_occ, "fixture."));
    }

    if (doc.contains("velocity_mode"))
        cfg.velocity_mode = parse_velocity_mode(doc["velocity_mode"].get<std::string>());
    if (doc.contains("risk_thresholds")) {
        const json& r = doc["risk_thresholds"];
        require_known_keys(r, {"high", "moderate"}, "risk_thresholds.");
        cfg.risk_thresholds.high = get_number(r, "high", cfg.risk_thresholds.high, "risk_thresholds.");
        cfg.risk_thresholds.moderate =
            get_number(r, "moderate", cfg.risk_thresholds.moderate, "risk_thresholds.");
        cfg.risk_thresholds.validate();
    }
    cfg.share_threshold = get_number(doc, "share_threshold", cfg.share_threshold, "");
    if (doc.contains("unmapped_abilities")) {
        std::string policy = doc["unmapped_abilities"].get<std::string>();
        if (policy == "error") cfg.unmapped_policy = UnmappedAbilityPolicy::Error;
        else if (policy == "drop") cfg.unmapped_policy = UnmappedAbilityPolicy::DropAndRenormalize;
        else throw Error("config: 'unmapped_abilities' must be error|drop, got '" + policy + "'");
    }
    cfg.parallelism =
        static_cast<unsigned>(get_number(doc, "parallelism", cfg.parallelism, ""));

    auto get_tau_list = [&](const char* key, std::vector<double>& target) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_array()) throw Error(std::string("config: '") + key + "' must be an array");
        target.clear();
        for (const auto& v : doc[key]) target.push_back(v.get<double>());
        if (target.empty()) throw Error(std::string("config: '") + key + "' must not be empty");
    };
    get_tau_list("grid_taus", cfg.grid_taus);
    get_tau_list("report_taus", cfg.report_taus);
    get_tau_list("shares_taus", cfg.shares_taus);
    if (cfg.shares_taus.size() != 2)
        throw Error("config: 'shares_taus' must list exactly two years");
    cfg.remote_delta_tau = get_number(doc, "remote_delta_tau", cfg.remote_delta_tau, "");
    cfg.top_n = static_cast<std::size_t>(get_number(doc, "top_n", static_cast<double>(cfg.top_n), ""));
    if (doc.contains("stress_years")) {
        cfg.stress_years.clear();
        for (const auto& v : doc["stress_years"]) cfg.stress_years.push_back(v.get<int>());
    }

    if (doc.contains("tier_params")) {
        const json& tp = doc["tier_params"];
        TierSet set = cfg.tier_params_override ? *cfg.tier_params_override : TierSet{};
        if (!cfg.tier_params_override) {
            // Start from the shipped file so partial overrides keep defaults.
            set = load_tier_params_file(cfg.resolved_path(cfg.paths.tier_params, "tier_params.tsv"));
        }
        for (int t = 1; t <= 3; ++t) {
            std::string key = std::to_string(t);
            if (!tp.contains(key)) continue;
            const json& row = tp[key];
            require_known_keys(row, {"k", "tau0", "L"}, "tier_params." + key + ".");
            TierParams& p = set.params[static_cast<std::size_t>(t - 1)];
            p.k = get_number(row, "k", p.k, "tier_params.");
            p.tau0 = get_number(row, "tau0", p.tau0, "tier_params.");
            p.L = get_number(row, "L", p.L, "tier_params.");
        }
        set.validate();
        cfg.tier_params_override = set;
    }
}

void apply_env(RunConfig& cfg) {
    if (const char* dir = std::getenv("ATE_OUTPUT_DIR"); dir && *dir) cfg.output_dir = dir;
}

std::string ledger_version(const std::string& data_dir) {
    fs::path path = fs::path(data_dir) / "parameter_ledger.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) return "unversioned";
    try {
        json doc = json::parse(in);
        return doc.value("version", "unversioned");
    } catch (const json::exception&) {
        return "unversioned";
    }
}

namespace {

std::string require_file(const std::string& path, const std::string& field) {
    if (path.empty())
        throw Error("config: required path '" + field + "' is not configured");
    if (!fs::exists(path))
        throw Error("config: path '" + field + "' does not exist: " + path);
    return path;
}

} // namespace

LoadedInputs load_parameters(const RunConfig& cfg) {
    LoadedInputs out;

    auto param_file = [&](const std::string& configured, const char* data_file,
                          const char* field) {
        std::string path = cfg.resolved_path(configured, data_file);
        return require_file(path, field);
    };

    std::string ability_path = param_file(cfg.paths.ability_map, "ability_map.tsv", "paths.ability_map");
    std::string rules_path =
        param_file(cfg.paths.modifier_rules, "modifier_rules.tsv", "paths.modifier_rules");
    std::string rubric_path = param_file(cfg.paths.rubric, "cov_rubric.json", "paths.rubric");
    std::string semantic_path =
        param_file(cfg.paths.semantic_rubric, "cov_rubric_semantic.json", "paths.semantic_rubric");
    std::string tiers_path = param_file(cfg.paths.tier_params, "tier_params.tsv", "paths.tier_params");
    std::string regions_path = param_file(cfg.paths.regions, "regions.tsv", "paths.regions");
    std::string labels_path =
        param_file(cfg.paths.group_labels, "group_labels.tsv", "paths.group_labels");
    std::string annotations_path =
        param_file(cfg.paths.annotations, "annotations.tsv", "paths.annotations");
    std::string scenarios_path = param_file(cfg.paths.scenarios, "scenarios.tsv", "paths.scenarios");
    std::string reinstatement_path =
        param_file(cfg.paths.reinstatement, "reinstatement.tsv", "paths.reinstatement");

    out.ability_map = AbilityMap::load_file(ability_path);
    out.modifier_rules = load_modifier_rules_file(rules_path);
    out.rubric = CovRubric::load_json_file(rubric_path);
    out.semantic_rubric = CovRubric::load_json_file(semantic_path);
    out.model.tiers = cfg.tier_params_override ? *cfg.tier_params_override
                                               : load_tier_params_file(tiers_path);
    out.model.regions = load_regions_file(regions_path);
    out.model.thresholds = cfg.risk_thresholds;
    out.model.mode = cfg.velocity_mode;
    out.scenarios = load_scenarios_file(scenarios_path);
    out.reinstatement = load_reinstatement_file(reinstatement_path);
    out.annotations = load_annotations_file(annotations_path);
    out.group_labels = load_group_labels_file(labels_path);
    out.ledger_version = ledger_version(cfg.data_dir);

    out.input_digests = {
        {"ability_map", file_digest(ability_path)},
        {"annotations", file_digest(annotations_path)},
        {"cov_rubric", file_digest(rubric_path)},
        {"cov_rubric_semantic", file_digest(semantic_path)},
        {"group_labels", file_digest(labels_path)},
        {"modifier_rules", file_digest(rules_path)},
        {"regions", file_digest(regions_path)},
        {"reinstatement", file_digest(reinstatement_path)},
        {"scenarios", file_digest(scenarios_path)},
        {"tier_params", file_digest(tiers_path)},
    };
    return out;
}

} // namespace ate
