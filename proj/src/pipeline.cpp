#include "ate/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ate/dsv.hpp"
#include "ate/error.hpp"
#include "ate/fixture.hpp"
#include "ate/text.hpp"
#include "ate/version.hpp"

namespace ate {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("pipeline: cannot write " + path.string());
    out << content;
    if (!out) throw Error("pipeline: short write to " + path.string());
}

std::string require_data_path(const std::string& path, const char* field) {
    if (path.empty())
        throw Error("config: required path '" + std::string(field) +
                    "' is not configured (enable fixture mode or set it)");
    if (!fs::exists(path))
        throw Error("config: path '" + std::string(field) + "' does not exist: " + path);
    return path;
}

struct NormalizedPaths {
    fs::path dir, tasks, profiles, employment, telework, tier_shares, titles, rejects;
    explicit NormalizedPaths(const fs::path& out_dir)
        : dir(out_dir / "normalized"),
          tasks(dir / "tasks.tsv"),
          profiles(dir / "profiles.tsv"),
          employment(dir / "employment.tsv"),
          telework(dir / "telework.tsv"),
          tier_shares(dir / "tier_shares.tsv"),
          titles(dir / "titles.tsv"),
          rejects(dir / "rejects.tsv") {}
};

struct ScorePaths {
    fs::path dir, base_scores, scores, components, summary;
    explicit ScorePaths(const fs::path& out_dir)
        : dir(out_dir / "scores"),
          base_scores(dir / "base_scores.tsv"),
          scores(dir / "scores.tsv"),
          components(dir / "components.tsv"),
          summary(dir / "score_summary.txt") {}
};

Dataset load_normalized(const RunConfig& cfg) {
    NormalizedPaths paths(cfg.output_dir);
    if (!fs::exists(paths.tasks))
        throw Error("pipeline: normalized data not found at " + paths.dir.string() +
                    "; run the ingest subcommand first");
    Dataset data;
    ParseReport report;
    {
        std::ifstream in(paths.tasks, std::ios::binary);
        data.tasks = parse_task_corpus(in, TaskColumnMap{}, report, nullptr, paths.tasks.string());
    }
    {
        std::ifstream in(paths.profiles, std::ios::binary);
        if (!in) throw Error("pipeline: missing " + paths.profiles.string());
        data.profiles =
            parse_ability_profiles(in, ProfileColumnMap{}, report, paths.profiles.string());
    }
    {
        std::ifstream in(paths.employment, std::ios::binary);
        if (!in) throw Error("pipeline: missing " + paths.employment.string());
        data.employment =
            parse_employment(in, EmploymentColumnMap{}, report, paths.employment.string());
    }
    {
        std::ifstream in(paths.telework, std::ios::binary);
        if (!in) throw Error("pipeline: missing " + paths.telework.string());
        data.telework = parse_telework(in, report, paths.telework.string());
    }
    {
        std::ifstream in(paths.tier_shares, std::ios::binary);
        if (!in) throw Error("pipeline: missing " + paths.tier_shares.string());
        data.tier_shares = parse_tier_shares(in, report, paths.tier_shares.string());
    }
    if (fs::exists(paths.titles)) {
        std::ifstream in(paths.titles, std::ios::binary);
        data.titles = parse_titles(in, report, paths.titles.string());
    }
    if (!report.rejects.empty())
        throw Error("pipeline: normalized data failed validation on re-parse (" +
                    report.rejects.front().reason + " at " + report.rejects.front().source + ":" +
                    std::to_string(report.rejects.front().line) + ")");
    data.sort_all();
    return data;
}

struct ScoredRun {
    LoadedInputs inputs;
    Dataset data;
    std::vector<OccupationScore> occupations;
};

// Shared by analyze/report: parameters + normalized data + base scores
// re-read from the score dump (the persisted record store is the interface).
ScoredRun load_scored_run(const RunConfig& cfg) {
    ScoredRun run;
    run.inputs = load_parameters(cfg);
    run.data = load_normalized(cfg);
    run.inputs.model.telework = run.data.telework;
    run.inputs.model.tier_shares = run.data.tier_shares;

    ScorePaths paths(cfg.output_dir);
    if (!fs::exists(paths.base_scores))
        throw Error("pipeline: scores not found at " + paths.base_scores.string() +
                    "; run the score subcommand first");
    DsvTable table = read_dsv_file(paths.base_scores.string());
    int c_soc = table.column_index("soc_code");
    int c_title = table.column_index("title");
    int c_base = table.column_index("base_score");
    if (c_soc < 0 || c_title < 0 || c_base < 0)
        throw Error("pipeline: " + paths.base_scores.string() + " has an unexpected layout");
    for (const auto& row : table.rows) {
        OccupationScore occ;
        occ.soc_code = row.fields[static_cast<std::size_t>(c_soc)];
        occ.title = row.fields[static_cast<std::size_t>(c_title)];
        auto base = parse_double(row.fields[static_cast<std::size_t>(c_base)]);
        if (!base)
            throw Error("pipeline: unparseable base score at " + paths.base_scores.string() + ":" +
                        std::to_string(row.line));
        occ.base_score = *base;
        run.occupations.push_back(std::move(occ));
    }
    return run;
}

Provenance make_provenance(const RunConfig& cfg, const LoadedInputs& inputs,
                           std::vector<std::pair<std::string, std::string>> extra_inputs = {},
                           std::vector<std::pair<std::string, std::string>> params = {}) {
    Provenance prov;
    prov.engine_version = kEngineVersion;
    prov.ledger_version = inputs.ledger_version;
    prov.inputs = inputs.input_digests;
    for (auto& e : extra_inputs) prov.inputs.push_back(std::move(e));
    std::sort(prov.inputs.begin(), prov.inputs.end());
    prov.params = std::move(params);
    prov.params.emplace_back("velocity_mode", std::string(velocity_mode_name(cfg.velocity_mode)));
    return prov;
}

std::vector<std::pair<std::string, std::string>> normalized_digests(const RunConfig& cfg) {
    NormalizedPaths paths(cfg.output_dir);
    return {
        {"normalized_tasks", file_digest(paths.tasks.string())},
        {"normalized_profiles", file_digest(paths.profiles.string())},
        {"normalized_employment", file_digest(paths.employment.string())},
        {"normalized_telework", file_digest(paths.telework.string())},
        {"normalized_tier_shares", file_digest(paths.tier_shares.string())},
    };
}

void emit_artifact(const fs::path& dir, const std::string& stem, const TableArtifact& artifact) {
    write_file(dir / (stem + ".tsv"), render(artifact, RenderFormat::Delimited));
    write_file(dir / (stem + ".txt"), render(artifact, RenderFormat::AlignedText));
}

} // namespace

int cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    NormalizedPaths paths(cfg.output_dir);
    Dataset data;
    ParseReport report;

    if (cfg.fixture.enabled) {
        FixtureSpec spec;
        spec.seed = cfg.fixture.seed;
        spec.n_occupations = cfg.fixture.n_occupations;
        spec.tasks_per_occ = cfg.fixture.tasks_per_occ;
        LoadedInputs params = load_parameters(cfg); // region ids come from the region table
        spec.region_ids.clear();
        for (const auto& r : params.model.regions) spec.region_ids.push_back(r.region_id);
        data = generate_fixture_corpus(spec);
        log << "ingest: fixture mode, seed " << cfg.fixture.seed << ", "
            << cfg.fixture.n_occupations << " occupations x " << cfg.fixture.tasks_per_occ
            << " tasks\n";
    } else {
        std::string tasks_path = require_data_path(cfg.paths.tasks, "paths.tasks");
        std::string profiles_path = require_data_path(cfg.paths.profiles, "paths.profiles");
        std::string employment_path = require_data_path(cfg.paths.employment, "paths.employment");
        std::string telework_path = require_data_path(
            cfg.resolved_path(cfg.paths.telework, "telework.tsv"), "paths.telework");
        std::string shares_path = require_data_path(
            cfg.resolved_path(cfg.paths.tier_shares, "tier_shares.tsv"), "paths.tier_shares");

        {
            std::ifstream in(tasks_path, std::ios::binary);
            data.tasks = parse_task_corpus(in, cfg.task_schema, report, &data.titles, tasks_path);
        }
        {
            std::ifstream in(profiles_path, std::ios::binary);
            data.profiles = parse_ability_profiles(in, cfg.profile_schema, report, profiles_path);
        }
        {
            std::ifstream in(employment_path, std::ios::binary);
            data.employment = parse_employment(in, cfg.employment_schema, report, employment_path);
        }
        {
            std::ifstream in(telework_path, std::ios::binary);
            data.telework = parse_telework(in, report, telework_path);
        }
        {
            std::ifstream in(shares_path, std::ios::binary);
            data.tier_shares = parse_tier_shares(in, report, shares_path);
        }
        if (!cfg.paths.titles.empty()) {
            std::string titles_path = require_data_path(cfg.paths.titles, "paths.titles");
            std::ifstream in(titles_path, std::ios::binary);
            auto titles = parse_titles(in, report, titles_path);
            for (auto& [soc, title] : titles) data.titles[soc] = title;
        }
        data.sort_all();
    }

    auto dump = [](auto writer, const auto& payload) {
        std::ostringstream out;
        writer(out, payload);
        return out.str();
    };
    write_file(paths.tasks, dump([](std::ostream& o, const std::vector<TaskRecord>& t) {
                   write_normalized_tasks(o, t);
               }, data.tasks));
    write_file(paths.profiles, dump([](std::ostream& o, const std::vector<AbilityProfile>& p) {
                   write_normalized_profiles(o, p);
               }, data.profiles));
    write_file(paths.employment, dump([](std::ostream& o, const std::vector<EmploymentRecord>& e) {
                   write_normalized_employment(o, e);
               }, data.employment));
    write_file(paths.telework, dump([](std::ostream& o, const TeleworkTable& t) {
                   write_normalized_telework(o, t);
               }, data.telework));
    write_file(paths.tier_shares, dump([](std::ostream& o, const TierShareTable& t) {
                   write_normalized_tier_shares(o, t);
               }, data.tier_shares));
    write_file(paths.titles, dump([](std::ostream& o, const std::map<std::string, std::string>& t) {
                   write_normalized_titles(o, t);
               }, data.titles));
    write_file(paths.rejects, dump([](std::ostream& o, const std::vector<Reject>& r) {
                   write_reject_report(o, r);
               }, report.rejects));

    log << "ingest: " << report.input_rows << " rows read, " << report.accepted() << " accepted, "
        << report.rejects.size() << " rejected\n";
    log << "ingest: " << data.tasks.size() << " tasks, " << data.profiles.size() << " profiles, "
        << data.employment.size() << " employment rows -> " << paths.dir.string() << "\n";
    return 0;
}

int cmd_fixture(const RunConfig& cfg, std::ostream& log) {
    RunConfig fixture_cfg = cfg;
    fixture_cfg.fixture.enabled = true;
    return cmd_ingest(fixture_cfg, log);
}

int cmd_score(const RunConfig& cfg, std::ostream& log) {
    LoadedInputs inputs = load_parameters(cfg);
    Dataset data = load_normalized(cfg);
    inputs.model.telework = data.telework;
    inputs.model.tier_shares = data.tier_shares;

    std::vector<OccupationScore> occupations =
        compute_base_scores(data, inputs.ability_map, inputs.modifier_rules, inputs.rubric,
                            cfg.unmapped_policy, cfg.parallelism);
    std::vector<AteRecord> records = score_grid(occupations, inputs.model, cfg.grid_taus);

    ScorePaths paths(cfg.output_dir);

    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& occ : occupations)
            rows.push_back({occ.soc_code, occ.title, fmt_shortest(occ.base_score)});
        std::ostringstream out;
        write_dsv(out, {"soc_code", "title", "base_score"}, rows);
        write_file(paths.base_scores, out.str());
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& rec : records)
            rows.push_back({rec.region_id, fmt_shortest(rec.tau), rec.soc_code,
                            fmt_shortest(rec.ate), fmt_shortest(rec.base_score),
                            std::string(risk_name(rec.risk))});
        std::ostringstream out;
        write_dsv(out, {"region_id", "tau", "soc_code", "ate", "base_score", "risk"}, rows);
        write_file(paths.scores, out.str());
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& occ : occupations)
            for (const auto& c : occ.components)
                rows.push_back({occ.soc_code, c.task_id, fmt_shortest(c.w), fmt_shortest(c.cap),
                                fmt_shortest(c.cov)});
        std::ostringstream out;
        write_dsv(out, {"soc_code", "task_id", "w", "cap", "cov"}, rows);
        write_file(paths.components, out.str());
    }

    // Summary: per (region, tau) risk-class counts, deterministic order.
    std::ostringstream summary;
    summary << "records: " << records.size() << " (" << occupations.size() << " occupations x "
            << inputs.model.regions.size() << " regions x " << cfg.grid_taus.size() << " taus)\n";
    summary << "velocity mode: " << velocity_mode_name(cfg.velocity_mode) << "\n";
    for (const auto& region : inputs.model.regions) {
        for (double tau : cfg.grid_taus) {
            std::size_t high = 0, moderate = 0, low = 0;
            for (const auto& rec : records) {
                if (rec.region_id != region.region_id || rec.tau != tau) continue;
                if (rec.risk == Risk::High) ++high;
                else if (rec.risk == Risk::Moderate) ++moderate;
                else ++low;
            }
            summary << region.region_id << " " << fmt_shortest(tau) << ": high " << high
                    << ", moderate " << moderate << ", low " << low << "\n";
        }
    }
    write_file(paths.summary, summary.str());
    log << summary.str();
    return 0;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& log) {
    ScoredRun run = load_scored_run(cfg);
    fs::path dir = fs::path(cfg.output_dir) / "analysis";
    ScorePaths score_paths(cfg.output_dir);

    auto extra = normalized_digests(cfg);
    extra.emplace_back("base_scores", file_digest(score_paths.base_scores.string()));

    // k stress grid over the configured scenarios and years.
    {
        std::vector<KStressCell> cells =
            k_stress(run.occupations, run.inputs.scenarios, cfg.stress_years, cfg.share_threshold,
                     run.inputs.model.tiers);
        auto prov = make_provenance(cfg, run.inputs, extra,
                                    {{"threshold", fmt_shortest(cfg.share_threshold)}});
        emit_artifact(dir, std::string(table_id_name(TableId::KStress)),
                      make_k_stress_table(cells, prov));
    }

    // One-at-a-time sensitivity suite around the first tier-1 region (or the
    // first region when no tier-1 region is configured).
    {
        const RegionConfig* region = nullptr;
        for (const auto& r : run.inputs.model.regions)
            if (r.tier == 1) { region = &r; break; }
        if (!region) region = &run.inputs.model.regions.front();

        OatContext ctx;
        ctx.model = &run.inputs.model;
        ctx.region_id = region->region_id;
        ctx.tau = cfg.remote_delta_tau;
        ctx.data = &run.data;
        ctx.ability_map = &run.inputs.ability_map;
        ctx.modifier_rules = &run.inputs.modifier_rules;
        ctx.rubric = &run.inputs.rubric;
        ctx.policy = cfg.unmapped_policy;
        ctx.baseline = run.occupations;

        std::vector<OatReport> reports;
        reports.push_back(oat_sensitivity(OatParam::K, {0.8, true}, ctx));
        reports.push_back(oat_sensitivity(OatParam::K, {1.2, true}, ctx));
        reports.push_back(oat_sensitivity(OatParam::Tau0, {-0.5, false}, ctx));
        reports.push_back(oat_sensitivity(OatParam::Tau0, {0.5, false}, ctx));
        // +10% would breach the tier-1 ceiling invariant (0.92 * 1.1 > 1),
        // so the shipped suite sweeps L by +-5%.
        reports.push_back(oat_sensitivity(OatParam::L, {0.95, true}, ctx));
        reports.push_back(oat_sensitivity(OatParam::L, {1.05, true}, ctx));
        reports.push_back(oat_sensitivity(OatParam::CovMultipliers, {0.5, true}, ctx));
        reports.push_back(oat_sensitivity(OatParam::CapUniform, {0.9, true}, ctx));
        reports.push_back(oat_sensitivity(OatParam::CapUniform, {1.1, true}, ctx));

        auto prov = make_provenance(cfg, run.inputs, extra,
                                    {{"region", region->region_id},
                                     {"tau", fmt_shortest(cfg.remote_delta_tau)}});
        emit_artifact(dir, std::string(table_id_name(TableId::OatSensitivity)),
                      make_oat_table(reports, prov));
    }

    // Keyword vs semantic rubric pilot over the ingested corpus.
    {
        PilotReport pilot = pilot_compare(run.data.tasks, run.inputs.rubric,
                                          run.inputs.semantic_rubric);
        auto prov = make_provenance(cfg, run.inputs, extra, {});
        emit_artifact(dir, std::string(table_id_name(TableId::Pilot)),
                      make_pilot_summary_table(pilot, prov));
        emit_artifact(dir, "pilot_details", make_pilot_details_table(pilot, prov));
        log << "pilot: keyword flagged " << pilot.keyword_flagged << "/" << pilot.corpus_size
            << " (" << fmt_fixed(100.0 * pilot.keyword_share, 1) << "%), semantic "
            << pilot.semantic_flagged << " (" << fmt_fixed(100.0 * pilot.semantic_share, 1)
            << "%)\n";
    }

    // Reinstatement scenario arithmetic.
    {
        auto prov = make_provenance(cfg, run.inputs, extra, {});
        emit_artifact(dir, std::string(table_id_name(TableId::Reinstatement)),
                      make_reinstatement_table(run.inputs.reinstatement, prov));
    }

    // External index validation; skipped (exit 0) when files are absent.
    {
        std::map<std::string, double> mean_ate;
        for (const auto& occ : run.occupations) {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& region : run.inputs.model.regions) {
                for (double tau : cfg.grid_taus) {
                    sum += make_ate(occ, region, tau, run.inputs.model).ate;
                    ++n;
                }
            }
            mean_ate[occ.soc_code] = sum / static_cast<double>(n);
        }

        std::vector<IndexValidation> results;
        std::vector<std::string> skipped;
        if (cfg.paths.external_indices.empty()) {
            skipped.push_back("(none configured)");
            log << "validation: skipped, no external index files configured\n";
        }
        for (const auto& [name, path] : cfg.paths.external_indices) {
            if (path.empty() || !fs::exists(path)) {
                skipped.push_back(name);
                log << "validation: skipped index '" << name << "' (file not found: " << path
                    << ")\n";
                continue;
            }
            IndexValidation v = correlate_with_index(name, mean_ate, load_index_file(path));
            log << "validation: " << name << " matched " << v.matched << ", rho "
                << fmt_fixed(v.rho, 4) << "\n";
            results.push_back(std::move(v));
        }
        auto prov = make_provenance(cfg, run.inputs, extra, {});
        emit_artifact(dir, std::string(table_id_name(TableId::Validation)),
                      make_validation_table(results, skipped, prov));
    }

    log << "analyze: artifacts written to " << dir.string() << "\n";
    return 0;
}

int cmd_report(const RunConfig& cfg, std::ostream& log) {
    ScoredRun run = load_scored_run(cfg);
    fs::path dir = fs::path(cfg.output_dir) / "tables";
    ScorePaths score_paths(cfg.output_dir);
    const ScoreModel& model = run.inputs.model;

    auto extra = normalized_digests(cfg);
    extra.emplace_back("base_scores", file_digest(score_paths.base_scores.string()));
    std::string mode(velocity_mode_name(cfg.velocity_mode));

    emit_artifact(dir, std::string(table_id_name(TableId::TierParams)),
                  make_tier_params_table(model.tiers, make_provenance(cfg, run.inputs, extra)));
    emit_artifact(dir, std::string(table_id_name(TableId::Telework)),
                  make_telework_table(model.telework, make_provenance(cfg, run.inputs, extra)));
    emit_artifact(dir, std::string(table_id_name(TableId::TierShares)),
                  make_tier_shares_table(model.tier_shares, make_provenance(cfg, run.inputs, extra)));
    emit_artifact(dir,
                  artifact_file_stem(TableId::RemoteDeltas, {}, cfg.remote_delta_tau),
                  make_remote_deltas_table(model, cfg.remote_delta_tau, run.inputs.group_labels,
                                           make_provenance(cfg, run.inputs, extra,
                                                           {{"tau", fmt_shortest(cfg.remote_delta_tau)}})));

    for (const auto& region : model.regions) {
        auto prov = make_provenance(cfg, run.inputs, extra, {{"region", region.region_id}});
        emit_artifact(dir, artifact_file_stem(TableId::TopN, region.region_id, std::nullopt, mode),
                      make_top_n_table(run.occupations, model, region, cfg.report_taus, cfg.top_n,
                                       run.inputs.annotations, run.inputs.group_labels, prov));
    }

    emit_artifact(dir,
                  artifact_file_stem(TableId::RegionalShares, {}, std::nullopt, mode),
                  make_regional_shares_table(run.occupations, model, cfg.shares_taus[0],
                                             cfg.shares_taus[1], cfg.share_threshold,
                                             run.inputs.group_labels,
                                             make_provenance(cfg, run.inputs, extra,
                                                             {{"threshold", fmt_shortest(cfg.share_threshold)}})));

    for (const auto& region : model.regions) {
        for (double tau : cfg.grid_taus) {
            std::vector<AteRecord> records;
            records.reserve(run.occupations.size());
            for (const auto& occ : run.occupations)
                records.push_back(make_ate(occ, region, tau, model));
            Histogram hist = histogram(records, 0.05);
            auto prov = make_provenance(cfg, run.inputs, extra,
                                        {{"region", region.region_id}, {"tau", fmt_shortest(tau)}});
            emit_artifact(dir, artifact_file_stem(TableId::HistogramBins, region.region_id, tau, mode),
                          make_histogram_table(hist, prov));
        }
    }

    log << "report: tables written to " << dir.string() << "\n";
    return 0;
}

} // namespace ate
