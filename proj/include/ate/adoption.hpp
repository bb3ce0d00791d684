#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace ate {

// Logistic adoption parameters for one metro tier.
struct TierParams {
    double k = 0;    // growth rate, 1/years, > 0
    double tau0 = 0; // inflection point, decimal year
    double L = 0;    // saturation ceiling, (0,1]

    void validate() const;
};

struct TierSet {
    std::array<TierParams, 3> params; // index 0 = tier 1

    const TierParams& tier(int t) const; // t in 1..3, throws otherwise
    void validate() const;
};

struct RegionConfig {
    std::string region_id;
    std::string name;
    int tier = 1;            // 1..3
    double employment_k = 0; // total employment in thousands, informational
};

// V(r, tau) = L / (1 + exp(-k * (tau - tau0))).
double logistic_v(const TierParams& params, double tau);

// Mid-quarter convention: quarter Q of year Y -> Y + (Q-1)/4 + 0.125.
double quarter_tau(int year, int quarter);

// Remote-work blend: (1 - r_o) * V(home, tau) + r_o * sum_j pi_j * V(tier_j, tau).
// pi must be normalized (|sum - 1| <= 1e-6) with one share per tier.
double v_eff(double r_o, std::span<const double> pi, const TierSet& tiers, int home_tier,
             double tau);

TierSet load_tier_params_file(const std::string& path);
std::vector<RegionConfig> load_regions_file(const std::string& path);

} // namespace ate
