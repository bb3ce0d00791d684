#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ate/error.hpp"
#include "ate/pipeline.hpp"
#include "ate/version.hpp"

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string output_dir;
    std::string data_dir;
    std::string mode;
    unsigned parallelism = 0;
    bool parallelism_set = false;
};

// Precedence: shipped defaults < config file < ATE_OUTPUT_DIR < flags.
ate::RunConfig resolve_config(const GlobalFlags& flags) {
    ate::RunConfig cfg = ate::default_config();
    if (!flags.config_path.empty()) ate::apply_config_file(cfg, flags.config_path);
    ate::apply_env(cfg);
    if (!flags.output_dir.empty()) cfg.output_dir = flags.output_dir;
    if (!flags.data_dir.empty()) cfg.data_dir = flags.data_dir;
    if (!flags.mode.empty()) cfg.velocity_mode = ate::parse_velocity_mode(flags.mode);
    if (flags.parallelism_set) cfg.parallelism = flags.parallelism;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ATE engine: agentic task exposure scoring for occupations across regions and years"};
    app.set_version_flag("--version", std::string("ate ") + ate::kEngineVersion);
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("-c,--config", flags.config_path, "Run configuration file (JSON)");
    app.add_option("-o,--out", flags.output_dir, "Output directory (overrides config and ATE_OUTPUT_DIR)");
    app.add_option("--data-dir", flags.data_dir, "Directory with the shipped parameter files");
    app.add_option("-m,--mode", flags.mode, "Velocity mode: residence | remote-adjusted");
    auto* jobs = app.add_option("-j,--jobs", flags.parallelism,
                                "Scoring worker count (0 = machine-detected)");

    auto* ingest = app.add_subcommand("ingest", "Parse sources into the normalized dump");
    auto* fixture = app.add_subcommand("fixture", "Generate a synthetic corpus and normalized dump");
    std::uint64_t seed = 0;
    int n_occ = 0, n_tasks = 0;
    auto* seed_opt = fixture->add_option("--seed", seed, "Fixture seed");
    auto* occ_opt = fixture->add_option("--occupations", n_occ, "Number of occupations");
    auto* tasks_opt = fixture->add_option("--tasks", n_tasks, "Tasks per occupation");
    auto* score = app.add_subcommand("score", "Compute ATE records for the configured grid");
    auto* analyze = app.add_subcommand("analyze", "Sensitivity grids, pilot report, validation");
    auto* report = app.add_subcommand("report", "Emit the paper-shaped output tables");

    CLI11_PARSE(app, argc, argv);
    flags.parallelism_set = jobs->count() > 0;

    try {
        ate::RunConfig cfg = resolve_config(flags);
        if (fixture->parsed()) {
            if (seed_opt->count()) cfg.fixture.seed = seed;
            if (occ_opt->count()) cfg.fixture.n_occupations = n_occ;
            if (tasks_opt->count()) cfg.fixture.tasks_per_occ = n_tasks;
            return ate::cmd_fixture(cfg, std::cout);
        }
        if (ingest->parsed()) return ate::cmd_ingest(cfg, std::cout);
        if (score->parsed()) return ate::cmd_score(cfg, std::cout);
        if (analyze->parsed()) return ate::cmd_analyze(cfg, std::cout);
        if (report->parsed()) return ate::cmd_report(cfg, std::cout);
    } catch (const ate::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
