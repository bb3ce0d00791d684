#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ate/analysis.hpp"
#include "ate/covmodel.hpp"
#include "ate/scoring.hpp"

namespace ate {

enum class TableId {
    TierParams,
    TopN,
    RegionalShares,
    Telework,
    TierShares,
    RemoteDeltas,
    KStress,
    HistogramBins,
    Pilot,
    Reinstatement,
    OatSensitivity,
    Validation,
};

std::string_view table_id_name(TableId id); // throws on out-of-range values
TableId parse_table_id(std::string_view name);

struct Provenance {
    std::string engine_version;
    std::string ledger_version;
    std::vector<std::pair<std::string, std::string>> inputs; // (name, digest)
    std::vector<std::pair<std::string, std::string>> params; // (key, value)
};

struct TableArtifact {
    TableId id = TableId::TierParams;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows; // cells pre-formatted (rounding at build time)
    Provenance provenance;
};

enum class RenderFormat { Delimited, AlignedText };

// Deterministic byte stream: '#'-prefixed provenance block, then the table.
std::string render(const TableArtifact& artifact, RenderFormat format);

// FNV-1a 64-bit content digests for provenance headers.
std::uint64_t fnv1a64(std::string_view bytes);
std::string file_digest(const std::string& path); // 16 hex chars; throws if unreadable

// Footnote markers sourced from a config file, keyed by soc_code.
struct Annotation {
    std::string marker;
    std::string note;
};
std::map<std::string, Annotation> load_annotations_file(const std::string& path);

std::map<std::string, std::string> load_group_labels_file(const std::string& path);

// --- artifact builders (column order and rounding fixed here) ---

TableArtifact make_tier_params_table(const TierSet& tiers, Provenance prov);

// Top-N occupations ranked by base score (ties break by soc_code ascending),
// one ATE column per report year. Rows sharing a 6-digit SOC base are flagged
// in the notes column alongside any configured markers.
TableArtifact make_top_n_table(std::span<const OccupationScore> occupations,
                               const ScoreModel& model, const RegionConfig& region,
                               std::span<const double> report_taus, std::size_t n,
                               const std::map<std::string, Annotation>& annotations,
                               const std::map<std::string, std::string>& group_labels,
                               Provenance prov);

// Share-crossing panel plus mean-ATE panel for two report years.
TableArtifact make_regional_shares_table(std::span<const OccupationScore> occupations,
                                         const ScoreModel& model, double tau_a, double tau_b,
                                         double threshold,
                                         const std::map<std::string, std::string>& group_labels,
                                         Provenance prov);

TableArtifact make_telework_table(const TeleworkTable& table, Provenance prov);
TableArtifact make_tier_shares_table(const TierShareTable& table, Provenance prov);

// Percentage change in group velocity (== mean ATE change) under the
// remote-adjusted blend, per (group, region), at one tau.
TableArtifact make_remote_deltas_table(const ScoreModel& model, double tau,
                                       const std::map<std::string, std::string>& group_labels,
                                       Provenance prov);

TableArtifact make_k_stress_table(std::span<const KStressCell> cells, Provenance prov);
TableArtifact make_histogram_table(const Histogram& hist, Provenance prov);
TableArtifact make_pilot_summary_table(const PilotReport& report, Provenance prov);
TableArtifact make_pilot_details_table(const PilotReport& report, Provenance prov);
TableArtifact make_reinstatement_table(std::span<const ReinstatementScenario> scenarios,
                                       Provenance prov);
TableArtifact make_oat_table(std::span<const OatReport> reports, Provenance prov);
TableArtifact make_validation_table(std::span<const IndexValidation> rows,
                                    std::span<const std::string> skipped_notices,
                                    Provenance prov);

// File name stem: table id plus the applicable region/tau/mode qualifiers,
// e.g. "histogram__sf_bay__2027__residence".
std::string artifact_file_stem(TableId id, std::string_view region_id = {},
                               std::optional<double> tau = std::nullopt,
                               std::string_view mode = {});

} // namespace ate
