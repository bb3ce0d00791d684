#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ate/adoption.hpp"
#include "ate/capmodel.hpp"
#include "ate/covmodel.hpp"
#include "ate/types.hpp"

namespace ate {

struct TaskWeight {
    std::string soc_code;
    std::string task_id;
    double w = 0; // [0,1], sums to 1 over an occupation
};

// w_t = importance_t * relevance_t / sum_s(importance_s * relevance_s).
// Error when every product is zero (weights undefined).
std::vector<TaskWeight> compute_weights(std::span<const TaskRecord> tasks);

// sum_t w_t * cap_t * cov_t over aligned per-task vectors.
double base_ate(std::span<const double> weights, std::span<const double> caps,
                std::span<const double> covs);

enum class Risk { High, Moderate, Low };
std::string_view risk_name(Risk r);

struct RiskThresholds {
    double high = 0.65;
    double moderate = 0.35;
    void validate() const;
};

// high iff ate >= high threshold; moderate iff moderate <= ate < high; low otherwise.
Risk classify_risk(double ate, const RiskThresholds& thresholds = {});

struct TaskComponent {
    std::string task_id;
    double w = 0, cap = 0, cov = 0;
};

// The tau-independent factor of one occupation, with per-task components
// retained for audit.
struct OccupationScore {
    std::string soc_code;
    std::string title;
    double base_score = 0; // sum w*cap*cov, in [0,1]
    std::vector<TaskComponent> components;
};

enum class VelocityMode { Residence, RemoteAdjusted };
std::string_view velocity_mode_name(VelocityMode m);
VelocityMode parse_velocity_mode(std::string_view s);

struct ScoreModel {
    TierSet tiers;
    std::vector<RegionConfig> regions;
    RiskThresholds thresholds;
    TeleworkTable telework;     // used in RemoteAdjusted mode
    TierShareTable tier_shares; // used in RemoteAdjusted mode
    VelocityMode mode = VelocityMode::Residence;

    const RegionConfig& region(std::string_view region_id) const;
    // V(region, tau) in Residence mode, V_eff in RemoteAdjusted mode
    // (telework and tier shares at the SOC major-group level).
    double velocity(const RegionConfig& region, std::string_view soc_major_group,
                    double tau) const;
};

struct AteRecord {
    std::string soc_code;
    std::string region_id;
    double tau = 0;
    double ate = 0;        // base_score * velocity
    double base_score = 0;
    Risk risk = Risk::Low;
    const OccupationScore* audit = nullptr; // per-task (w, cap, cov) components
};

AteRecord make_ate(const OccupationScore& occ, const RegionConfig& region, double tau,
                   const ScoreModel& model);

// Base scores for every occupation in the dataset, parallel across
// occupations (deterministic output regardless of worker count). Occupations
// are returned sorted by soc_code.
std::vector<OccupationScore> compute_base_scores(const Dataset& data, const AbilityMap& amap,
                                                 const std::vector<TextModifierRule>& rules,
                                                 const CovRubric& rubric,
                                                 UnmappedAbilityPolicy policy,
                                                 unsigned parallelism = 0);

// Full (occupation x region x tau) grid, ordered by (region order, tau, soc).
std::vector<AteRecord> score_grid(std::span<const OccupationScore> occupations,
                                  const ScoreModel& model, std::span<const double> taus);

struct ShareRow {
    std::string region_id;
    std::string soc_major_group;
    std::size_t n_occupations = 0;
    std::size_t n_crossing = 0;
    double share_pct = 0; // full precision; round at emission
    double mean_ate = 0;  // unweighted across occupations
};

// Per (region, major group) share of occupations with ate >= threshold plus
// mean ATE. All records must share a single tau.
std::vector<ShareRow> regional_share_table(std::span<const AteRecord> records, double threshold);

struct Histogram {
    double bin_width = 0.05;
    long long first_bin = 0;          // bin i covers [(first_bin+i)*w, (first_bin+i+1)*w)
    std::vector<std::size_t> counts;  // contiguous, includes empty interior bins

    double lo(std::size_t i) const { return static_cast<double>(first_bin + static_cast<long long>(i)) * bin_width; }
    double hi(std::size_t i) const { return static_cast<double>(first_bin + static_cast<long long>(i) + 1) * bin_width; }
    std::size_t total() const;
};

// Left-closed right-open bins aligned to multiples of bin_width; a value on a
// bin edge falls into the bin starting there.
Histogram histogram(std::span<const AteRecord> records, double bin_width = 0.05);

} // namespace ate
