#include "ate/adoption.hpp"

#include <cmath>
#include <fstream>

#include "ate/dsv.hpp"
#include "ate/error.hpp"
#include "ate/text.hpp"

namespace ate {

void TierParams::validate() const {
    if (!(k > 0.0)) throw Error("adoption: growth rate k must be positive");
    if (!(L > 0.0) || L > 1.0) throw Error("adoption: ceiling L must lie in (0,1]");
    if (!std::isfinite(tau0)) throw Error("adoption: non-finite inflection point");
}

const TierParams& TierSet::tier(int t) const {
    if (t < 1 || t > 3) throw Error("adoption: tier must be 1..3, got " + std::to_string(t));
    return params[static_cast<std::size_t>(t - 1)];
}

void TierSet::validate() const {
    for (const auto& p : params) p.validate();
}

double logistic_v(const TierParams& params, double tau) {
    return params.L / (1.0 + std::exp(-params.k * (tau - params.tau0)));
}

double quarter_tau(int year, int quarter) {
    if (quarter < 1 || quarter > 4)
        throw Error("adoption: quarter must be 1..4, got " + std::to_string(quarter));
    return static_cast<double>(year) + (quarter - 1) / 4.0 + 0.125;
}

double v_eff(double r_o, std::span<const double> pi, const TierSet& tiers, int home_tier,
             double tau) {
    if (r_o < 0.0 || r_o > 1.0)
        throw Error("adoption: telework rate " + fmt_shortest(r_o) + " outside [0,1]");
    if (pi.size() != 3)
        throw Error("adoption: tier-share vector must have 3 components");
    double sum = 0.0;
    for (double p : pi) {
        if (p < 0.0 || p > 1.0)
            throw Error("adoption: tier share " + fmt_shortest(p) + " outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw Error("adoption: tier shares sum to " + fmt_shortest(sum) + ", expected 1");

    double home_v = logistic_v(tiers.tier(home_tier), tau);
    double blended = 0.0;
    for (int t = 1; t <= 3; ++t)
        blended += pi[static_cast<std::size_t>(t - 1)] * logistic_v(tiers.tier(t), tau);
    return (1.0 - r_o) * home_v + r_o * blended;
}

TierSet load_tier_params_file(const std::string& path) {
    DsvTable table = read_dsv_file(path);
    int c_tier = table.column_index("tier");
    int c_k = table.column_index("k");
    int c_tau0 = table.column_index("tau0");
    int c_l = table.column_index("L");
    if (c_tier < 0 || c_k < 0 || c_tau0 < 0 || c_l < 0)
        throw Error("adoption: " + path + ": tier params need columns tier, k, tau0, L");
    TierSet out;
    std::array<bool, 3> seen{};
    for (const auto& row : table.rows) {
        auto tier = parse_long(row.fields[static_cast<std::size_t>(c_tier)]);
        auto k = parse_double(row.fields[static_cast<std::size_t>(c_k)]);
        auto tau0 = parse_double(row.fields[static_cast<std::size_t>(c_tau0)]);
        auto L = parse_double(row.fields[static_cast<std::size_t>(c_l)]);
        if (!tier || !k || !tau0 || !L)
            throw Error("adoption: " + path + ": unparseable tier row at line " +
                        std::to_string(row.line));
        if (*tier < 1 || *tier > 3)
            throw Error("adoption: " + path + ": tier must be 1..3 at line " + std::to_string(row.line));
        auto idx = static_cast<std::size_t>(*tier - 1);
        if (seen[idx])
            throw Error("adoption: " + path + ": duplicate tier " + std::to_string(*tier));
        seen[idx] = true;
        out.params[idx] = {*k, *tau0, *L};
    }
    if (!(seen[0] && seen[1] && seen[2]))
        throw Error("adoption: " + path + ": all three tiers must be present");
    out.validate();
    return out;
}

std::vector<RegionConfig> load_regions_file(const std::string& path) {
    DsvTable table = read_dsv_file(path);
    int c_id = table.column_index("region_id");
    int c_name = table.column_index("name");
    int c_tier = table.column_index("tier");
    int c_emp = table.column_index("employment_k");
    if (c_id < 0 || c_name < 0 || c_tier < 0)
        throw Error("adoption: " + path + ": regions need columns region_id, name, tier");
    std::vector<RegionConfig> out;
    for (const auto& row : table.rows) {
        RegionConfig region;
        region.region_id = std::string(trim(row.fields[static_cast<std::size_t>(c_id)]));
        region.name = row.fields[static_cast<std::size_t>(c_name)];
        auto tier = parse_long(row.fields[static_cast<std::size_t>(c_tier)]);
        if (region.region_id.empty() || !tier || *tier < 1 || *tier > 3)
            throw Error("adoption: " + path + ": bad region row at line " + std::to_string(row.line));
        region.tier = static_cast<int>(*tier);
        if (c_emp >= 0 && static_cast<std::size_t>(c_emp) < row.fields.size())
            region.employment_k =
                parse_double(row.fields[static_cast<std::size_t>(c_emp)]).value_or(0.0);
        for (const auto& existing : out)
            if (existing.region_id == region.region_id)
                throw Error("adoption: " + path + ": duplicate region id " + region.region_id);
        out.push_back(std::move(region));
    }
    if (out.empty()) throw Error("adoption: " + path + ": no regions defined");
    return out;
}

} // namespace ate
