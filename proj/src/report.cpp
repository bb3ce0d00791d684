#include "ate/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ate/dsv.hpp"
#include "ate/error.hpp"
#include "ate/text.hpp"

namespace ate {

namespace {

const std::pair<TableId, const char*> kTableNames[] = {
    {TableId::TierParams, "tier_params"},
    {TableId::TopN, "top_n"},
    {TableId::RegionalShares, "regional_shares"},
    {TableId::Telework, "telework"},
    {TableId::TierShares, "tier_shares"},
    {TableId::RemoteDeltas, "remote_deltas"},
    {TableId::KStress, "k_stress"},
    {TableId::HistogramBins, "histogram"},
    {TableId::Pilot, "pilot"},
    {TableId::Reinstatement, "reinstatement"},
    {TableId::OatSensitivity, "oat_sensitivity"},
    {TableId::Validation, "validation"},
};

// Strips an O*NET-style detail suffix: "13-1199.05" -> "13-1199".
std::string soc_base6(const std::string& soc) {
    auto dot = soc.find('.');
    return dot == std::string::npos ? soc : soc.substr(0, dot);
}

std::string group_display(const std::string& group,
                          const std::map<std::string, std::string>& labels) {
    auto it = labels.find(group);
    return it != labels.end() ? it->second : "SOC " + group;
}

} // namespace

std::string_view table_id_name(TableId id) {
    for (const auto& [tid, name] : kTableNames)
        if (tid == id) return name;
    throw Error("report: unknown table id value " +
                std::to_string(static_cast<int>(id)));
}

TableId parse_table_id(std::string_view name) {
    for (const auto& [tid, tname] : kTableNames)
        if (name == tname) return tid;
    throw Error("report: unknown table id '" + std::string(name) + "'");
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("report: cannot digest missing file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    char out[17];
    std::snprintf(out, sizeof out, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(buf.str())));
    return out;
}

namespace {

void render_provenance(std::ostream& out, const TableArtifact& artifact) {
    out << "# table: " << table_id_name(artifact.id) << '\n';
    out << "# engine: " << artifact.provenance.engine_version << '\n';
    out << "# ledger: " << artifact.provenance.ledger_version << '\n';
    for (const auto& [name, digest] : artifact.provenance.inputs)
        out << "# input: " << name << '=' << digest << '\n';
    for (const auto& [key, value] : artifact.provenance.params)
        out << "# param: " << key << '=' << value << '\n';
}

} // namespace

std::string render(const TableArtifact& artifact, RenderFormat format) {
    std::string_view name = table_id_name(artifact.id); // validates the id
    (void)name;
    for (const auto& row : artifact.rows)
        if (row.size() != artifact.columns.size())
            throw Error("report: row width mismatch in table " + std::string(table_id_name(artifact.id)));

    std::ostringstream out;
    render_provenance(out, artifact);
    if (format == RenderFormat::Delimited) {
        write_dsv(out, artifact.columns, artifact.rows);
        return out.str();
    }

    // Aligned text: numeric cells right-aligned, text left-aligned.
    std::vector<std::size_t> widths(artifact.columns.size());
    for (std::size_t i = 0; i < artifact.columns.size(); ++i) widths[i] = artifact.columns[i].size();
    for (const auto& row : artifact.rows)
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());

    auto is_numeric = [](const std::string& cell) {
        std::string_view v = cell;
        if (!v.empty() && v.front() == '+') v.remove_prefix(1); // from_chars rejects '+'
        return parse_double(v).has_value();
    };
    auto emit_row = [&](const std::vector<std::string>& cells, bool header) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << "  ";
            bool numeric = !header && is_numeric(cells[i]);
            std::size_t pad = widths[i] - cells[i].size();
            if (numeric) out << std::string(pad, ' ') << cells[i];
            else if (i + 1 == cells.size()) out << cells[i]; // no trailing spaces
            else out << cells[i] << std::string(pad, ' ');
        }
        out << '\n';
    };
    emit_row(artifact.columns, true);
    {
        std::size_t total = 0;
        for (std::size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i ? 2 : 0);
        out << std::string(total, '-') << '\n';
    }
    for (const auto& row : artifact.rows) emit_row(row, false);
    return out.str();
}

std::map<std::string, Annotation> load_annotations_file(const std::string& path) {
    DsvTable table = read_dsv_file(path);
    int c_soc = table.column_index("soc_code");
    int c_marker = table.column_index("marker");
    int c_note = table.column_index("note");
    if (c_soc < 0 || c_marker < 0)
        throw Error("report: " + path + ": annotations need columns soc_code, marker");
    std::map<std::string, Annotation> out;
    for (const auto& row : table.rows) {
        Annotation a;
        a.marker = row.fields[static_cast<std::size_t>(c_marker)];
        if (c_note >= 0 && static_cast<std::size_t>(c_note) < row.fields.size())
            a.note = row.fields[static_cast<std::size_t>(c_note)];
        out[std::string(trim(row.fields[static_cast<std::size_t>(c_soc)]))] = std::move(a);
    }
    return out;
}

std::map<std::string, std::string> load_group_labels_file(const std::string& path) {
    DsvTable table = read_dsv_file(path);
    int c_group = table.column_index("soc_major_group");
    int c_label = table.column_index("label");
    if (c_group < 0 || c_label < 0)
        throw Error("report: " + path + ": group labels need columns soc_major_group, label");
    std::map<std::string, std::string> out;
    for (const auto& row : table.rows)
        out[std::string(trim(row.fields[static_cast<std::size_t>(c_group)]))] =
            row.fields[static_cast<std::size_t>(c_label)];
    return out;
}

TableArtifact make_tier_params_table(const TierSet& tiers, Provenance prov) {
    TableArtifact t;
    t.id = TableId::TierParams;
    t.provenance = std::move(prov);
    t.columns = {"tier", "k", "tau0", "L"};
    for (int tier = 1; tier <= 3; ++tier) {
        const TierParams& p = tiers.tier(tier);
        t.rows.push_back({std::to_string(tier), fmt_shortest(p.k), fmt_shortest(p.tau0),
                          fmt_shortest(p.L)});
    }
    return t;
}

TableArtifact make_top_n_table(std::span<const OccupationScore> occupations,
                               const ScoreModel& model, const RegionConfig& region,
                               std::span<const double> report_taus, std::size_t n,
                               const std::map<std::string, Annotation>& annotations,
                               const std::map<std::string, std::string>& group_labels,
                               Provenance prov) {
    std::vector<const OccupationScore*> ranked;
    ranked.reserve(occupations.size());
    for (const auto& occ : occupations) ranked.push_back(&occ);
    std::sort(ranked.begin(), ranked.end(),
              [](const OccupationScore* a, const OccupationScore* b) {
                  if (a->base_score != b->base_score) return a->base_score > b->base_score;
                  return a->soc_code < b->soc_code; // deterministic tie break
              });
    if (ranked.size() > n) ranked.resize(n);

    // Duplicate detection on the 6-digit base within the emitted rows.
    std::map<std::string, int> base_counts;
    for (const auto* occ : ranked) ++base_counts[soc_base6(occ->soc_code)];

    TableArtifact t;
    t.id = TableId::TopN;
    t.provenance = std::move(prov);
    t.columns = {"rank", "soc_code", "title", "category"};
    for (double tau : report_taus) t.columns.push_back("ate_" + fmt_shortest(tau));
    t.columns.push_back("notes");

    std::size_t rank = 1;
    for (const auto* occ : ranked) {
        std::vector<std::string> row;
        row.push_back(std::to_string(rank++));
        row.push_back(occ->soc_code);
        row.push_back(occ->title);
        row.push_back(group_display(soc_major_group(occ->soc_code), group_labels));
        for (double tau : report_taus) {
            double v = model.velocity(region, soc_major_group(occ->soc_code), tau);
            row.push_back(fmt_fixed(occ->base_score * v, 2));
        }
        std::string notes;
        if (auto it = annotations.find(occ->soc_code); it != annotations.end())
            notes += it->second.marker;
        if (base_counts[soc_base6(occ->soc_code)] > 1) {
            if (!notes.empty()) notes += ' ';
            notes += "dup:" + soc_base6(occ->soc_code);
        }
        row.push_back(notes);
        t.rows.push_back(std::move(row));
    }
    return t;
}

TableArtifact make_regional_shares_table(std::span<const OccupationScore> occupations,
                                         const ScoreModel& model, double tau_a, double tau_b,
                                         double threshold,
                                         const std::map<std::string, std::string>& group_labels,
                                         Provenance prov) {
    TableArtifact t;
    t.id = TableId::RegionalShares;
    t.provenance = std::move(prov);
    t.columns = {"category", "soc_major_group"};
    for (const auto& region : model.regions) {
        t.columns.push_back(region.region_id + "_share_" + fmt_shortest(tau_a));
        t.columns.push_back(region.region_id + "_share_" + fmt_shortest(tau_b));
        t.columns.push_back(region.region_id + "_mean_" + fmt_shortest(tau_a));
        t.columns.push_back(region.region_id + "_mean_" + fmt_shortest(tau_b));
    }

    std::set<std::string> groups;
    for (const auto& occ : occupations) groups.insert(soc_major_group(occ.soc_code));

    // (region, tau) -> share rows keyed by group
    auto shares_for = [&](double tau) {
        std::vector<AteRecord> records;
        for (const auto& region : model.regions)
            for (const auto& occ : occupations) records.push_back(make_ate(occ, region, tau, model));
        return regional_share_table(records, threshold);
    };
    std::vector<ShareRow> rows_a = shares_for(tau_a);
    std::vector<ShareRow> rows_b = shares_for(tau_b);
    auto find_row = [](const std::vector<ShareRow>& rows, const std::string& region,
                       const std::string& group) -> const ShareRow* {
        for (const auto& r : rows)
            if (r.region_id == region && r.soc_major_group == group) return &r;
        return nullptr;
    };

    for (const auto& group : groups) {
        std::vector<std::string> row{group_display(group, group_labels), group};
        for (const auto& region : model.regions) {
            const ShareRow* a = find_row(rows_a, region.region_id, group);
            const ShareRow* b = find_row(rows_b, region.region_id, group);
            row.push_back(a ? fmt_fixed(a->share_pct, 1) : "-");
            row.push_back(b ? fmt_fixed(b->share_pct, 1) : "-");
            row.push_back(a ? fmt_fixed(a->mean_ate, 2) : "-");
            row.push_back(b ? fmt_fixed(b->mean_ate, 2) : "-");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

TableArtifact make_telework_table(const TeleworkTable& table, Provenance prov) {
    TableArtifact t;
    t.id = TableId::Telework;
    t.provenance = std::move(prov);
    t.columns = {"soc_major_group", "r_o"};
    auto rows = table.rows;
    std::sort(rows.begin(), rows.end(), [](const TeleworkRow& a, const TeleworkRow& b) {
        return a.soc_major_group < b.soc_major_group;
    });
    for (const auto& r : rows) t.rows.push_back({r.soc_major_group, fmt_fixed(r.r_o, 3)});
    return t;
}

TableArtifact make_tier_shares_table(const TierShareTable& table, Provenance prov) {
    TableArtifact t;
    t.id = TableId::TierShares;
    t.provenance = std::move(prov);
    t.columns = {"soc_major_group", "pi_tier1", "pi_tier2", "pi_tier3"};
    auto rows = table.rows;
    std::sort(rows.begin(), rows.end(), [](const TierShareRow& a, const TierShareRow& b) {
        return a.soc_major_group < b.soc_major_group;
    });
    for (const auto& r : rows)
        t.rows.push_back({r.soc_major_group, fmt_fixed(r.pi[0], 6), fmt_fixed(r.pi[1], 6),
                          fmt_fixed(r.pi[2], 6)});
    return t;
}

TableArtifact make_remote_deltas_table(const ScoreModel& model, double tau,
                                       const std::map<std::string, std::string>& group_labels,
                                       Provenance prov) {
    TableArtifact t;
    t.id = TableId::RemoteDeltas;
    t.provenance = std::move(prov);
    t.columns = {"category", "soc_major_group"};
    for (const auto& region : model.regions)
        t.columns.push_back(region.region_id + "_delta_pct");

    std::set<std::string> groups;
    for (const auto& row : model.telework.rows)
        if (model.tier_shares.has_group(row.soc_major_group)) groups.insert(row.soc_major_group);

    for (const auto& group : groups) {
        std::vector<std::string> row{group_display(group, group_labels), group};
        double r_o = model.telework.r_for_group(group);
        const auto& pi = model.tier_shares.pi_for_group(group);
        for (const auto& region : model.regions) {
            double v = logistic_v(model.tiers.tier(region.tier), tau);
            double veff = v_eff(r_o, pi, model.tiers, region.tier, tau);
            row.push_back(fmt_signed(100.0 * (veff / v - 1.0), 1));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

TableArtifact make_k_stress_table(std::span<const KStressCell> cells, Provenance prov) {
    TableArtifact t;
    t.id = TableId::KStress;
    t.provenance = std::move(prov);
    t.columns = {"tier", "scenario", "year", "n_occupations", "n_crossing", "pct"};
    for (const auto& cell : cells)
        t.rows.push_back({std::to_string(cell.tier), cell.scenario, std::to_string(cell.year),
                          std::to_string(cell.n_occupations), std::to_string(cell.n_crossing),
                          fmt_fixed(cell.pct, 1)});
    return t;
}

TableArtifact make_histogram_table(const Histogram& hist, Provenance prov) {
    TableArtifact t;
    t.id = TableId::HistogramBins;
    t.provenance = std::move(prov);
    t.columns = {"bin_lo", "bin_hi", "count"};
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        t.rows.push_back({fmt_fixed(hist.lo(i), 2), fmt_fixed(hist.hi(i), 2),
                          std::to_string(hist.counts[i])});
    return t;
}

TableArtifact make_pilot_summary_table(const PilotReport& report, Provenance prov) {
    TableArtifact t;
    t.id = TableId::Pilot;
    t.provenance = std::move(prov);
    t.columns = {"rubric", "flagged", "corpus", "share_pct"};
    t.rows.push_back({"keyword", std::to_string(report.keyword_flagged),
                      std::to_string(report.corpus_size), fmt_fixed(100.0 * report.keyword_share, 1)});
    t.rows.push_back({"semantic", std::to_string(report.semantic_flagged),
                      std::to_string(report.corpus_size), fmt_fixed(100.0 * report.semantic_share, 1)});
    return t;
}

TableArtifact make_pilot_details_table(const PilotReport& report, Provenance prov) {
    TableArtifact t;
    t.id = TableId::Pilot;
    t.provenance = std::move(prov);
    t.columns = {"soc_code", "task_id", "new_categories"};
    for (const auto& flag : report.newly_flagged) {
        std::string cats;
        for (const auto& c : flag.categories) {
            if (!cats.empty()) cats += '|';
            cats += c;
        }
        t.rows.push_back({flag.soc_code, flag.task_id, cats});
    }
    return t;
}

TableArtifact make_reinstatement_table(std::span<const ReinstatementScenario> scenarios,
                                       Provenance prov) {
    TableArtifact t;
    t.id = TableId::Reinstatement;
    t.provenance = std::move(prov);
    t.columns = {"scenario", "base_workers", "conversion_pct", "displaced", "reinstated_low",
                 "reinstated_high"};
    for (const auto& s : scenarios) {
        ReinstatementBounds b = reinstatement_bounds(s);
        t.rows.push_back({s.name, std::to_string(static_cast<long long>(s.base_workers)),
                          fmt_fixed(100.0 * s.conversion, 0),
                          std::to_string(round_to_thousand(b.displaced)),
                          std::to_string(round_to_thousand(b.reinstated_low)),
                          std::to_string(round_to_thousand(b.reinstated_high))});
    }
    return t;
}

TableArtifact make_oat_table(std::span<const OatReport> reports, Provenance prov) {
    TableArtifact t;
    t.id = TableId::OatSensitivity;
    t.provenance = std::move(prov);
    t.columns = {"param", "perturbation", "mode", "v_before", "v_after", "v_change_pct",
                 "mean_ate_before", "mean_ate_after", "top_ate_before", "top_ate_after",
                 "rank_changed"};
    for (const auto& r : reports) {
        double v_change = r.v_before != 0.0 ? 100.0 * (r.v_after / r.v_before - 1.0) : 0.0;
        t.rows.push_back({std::string(oat_param_name(r.param)), fmt_shortest(r.perturbation),
                          r.relative ? "relative" : "absolute", fmt_fixed(r.v_before, 6),
                          fmt_fixed(r.v_after, 6), fmt_signed(v_change, 2),
                          fmt_fixed(r.mean_ate_before, 4), fmt_fixed(r.mean_ate_after, 4),
                          fmt_fixed(r.top_ate_before, 4), fmt_fixed(r.top_ate_after, 4),
                          r.rank_changed ? "yes" : "no"});
    }
    return t;
}

TableArtifact make_validation_table(std::span<const IndexValidation> rows,
                                    std::span<const std::string> skipped_notices,
                                    Provenance prov) {
    TableArtifact t;
    t.id = TableId::Validation;
    t.provenance = std::move(prov);
    t.columns = {"index", "matched", "rho", "note"};
    for (const auto& r : rows)
        t.rows.push_back({r.index_name, std::to_string(r.matched), fmt_fixed(r.rho, 4), ""});
    for (const auto& notice : skipped_notices) t.rows.push_back({notice, "-", "-", "skipped"});
    return t;
}

std::string artifact_file_stem(TableId id, std::string_view region_id, std::optional<double> tau,
                               std::string_view mode) {
    std::string stem(table_id_name(id));
    if (!region_id.empty()) stem += "__" + std::string(region_id);
    if (tau) stem += "__" + fmt_shortest(*tau);
    if (!mode.empty()) {
        std::string m(mode);
        std::replace(m.begin(), m.end(), '-', '_');
        stem += "__" + m;
    }
    return stem;
}

} // namespace ate
