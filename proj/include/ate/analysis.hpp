#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ate/scoring.hpp"

namespace ate {

// Per-tier growth-rate overrides for the k stress test.
struct ScenarioSpec {
    std::string name;
    std::array<double, 3> k{}; // tier 1..3
};

std::vector<ScenarioSpec> load_scenarios_file(const std::string& path);

struct KStressCell {
    int tier = 1;
    std::string scenario;
    int year = 0;
    std::size_t n_occupations = 0;
    std::size_t n_crossing = 0;
    double pct = 0; // full precision; round to 1 dp at emission
};

// Grid of threshold-crossing percentages per (tier, scenario, year). All
// parameters except k stay at the baseline tier values.
std::vector<KStressCell> k_stress(std::span<const OccupationScore> occupations,
                                  std::span<const ScenarioSpec> scenarios,
                                  std::span<const int> years, double threshold,
                                  const TierSet& baseline);

enum class OatParam { K, Tau0, L, CovMultipliers, CapUniform };
std::string_view oat_param_name(OatParam p);

struct OatPerturbation {
    double value = 1.0;   // factor when relative, delta when absolute
    bool relative = true;
};

struct OatContext {
    const ScoreModel* model = nullptr;
    std::string region_id;
    double tau = 0;
    // Needed to reprice base scores for CovMultipliers / CapUniform sweeps.
    const Dataset* data = nullptr;
    const AbilityMap* ability_map = nullptr;
    const std::vector<TextModifierRule>* modifier_rules = nullptr;
    const CovRubric* rubric = nullptr;
    UnmappedAbilityPolicy policy = UnmappedAbilityPolicy::Error;
    std::span<const OccupationScore> baseline;
};

struct OatReport {
    OatParam param = OatParam::K;
    double perturbation = 1.0;
    bool relative = true;
    double v_before = 0, v_after = 0;       // region velocity at tau
    double mean_ate_before = 0, mean_ate_after = 0;
    double top_ate_before = 0, top_ate_after = 0;
    bool rank_changed = false;              // occupation ordering by ATE
};

// One-at-a-time sensitivity: perturbs a single parameter, holding everything
// else fixed. Perturbations that would violate type invariants (e.g. L > 1)
// are errors.
OatReport oat_sensitivity(OatParam param, const OatPerturbation& p, const OatContext& ctx);

// Spearman rank correlation with midrank tie handling, computed as the
// product-moment correlation of the rank vectors. Errors on length mismatch,
// n < 2, or zero rank variance.
double spearman(std::span<const double> x, std::span<const double> y);

struct ReinstatementScenario {
    std::string name;
    double base_workers = 0;
    double conversion = 0;          // [0,1]
    double reinstatement_low = 0.5; // <= high
    double reinstatement_high = 0.8;

    void validate() const;
};

struct ReinstatementBounds {
    double displaced = 0;
    double reinstated_low = 0;
    double reinstated_high = 0;
};

ReinstatementBounds reinstatement_bounds(const ReinstatementScenario& s);
// Emission rounding for reinstatement tables.
long long round_to_thousand(double v);

std::vector<ReinstatementScenario> load_reinstatement_file(const std::string& path);

// External validation: joins an occupation-score map against an external
// (soc_code -> index score) table and reports the match count and Spearman rho.
struct IndexValidation {
    std::string index_name;
    std::size_t matched = 0;
    double rho = 0;
};

std::map<std::string, double> load_index_file(const std::string& path);
IndexValidation correlate_with_index(const std::string& index_name,
                                     const std::map<std::string, double>& occupation_scores,
                                     const std::map<std::string, double>& index_scores);

} // namespace ate
