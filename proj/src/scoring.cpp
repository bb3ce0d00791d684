#include "ate/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "ate/error.hpp"
#include "ate/text.hpp"

namespace ate {

std::vector<TaskWeight> compute_weights(std::span<const TaskRecord> tasks) {
    if (tasks.empty()) throw Error("scoring: compute_weights on empty task list");
    double total = 0.0;
    for (const auto& t : tasks) total += t.importance * t.relevance;
    if (total <= 0.0)
        throw Error("scoring: all importance*relevance products are zero for " +
                    tasks.front().soc_code + "; weights undefined");
    std::vector<TaskWeight> out;
    out.reserve(tasks.size());
    for (const auto& t : tasks)
        out.push_back({t.soc_code, t.task_id, t.importance * t.relevance / total});
    return out;
}

double base_ate(std::span<const double> weights, std::span<const double> caps,
                std::span<const double> covs) {
    if (weights.size() != caps.size() || weights.size() != covs.size())
        throw Error("scoring: component vectors have mismatched lengths");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * caps[i] * covs[i];
    return sum;
}

std::string_view risk_name(Risk r) {
    switch (r) {
    case Risk::High: return "high";
    case Risk::Moderate: return "moderate";
    case Risk::Low: return "low";
    }
    throw Error("scoring: invalid risk value");
}

void RiskThresholds::validate() const {
    if (!(moderate < high) || moderate < 0.0 || high > 1.0)
        throw Error("scoring: risk thresholds must satisfy 0 <= moderate < high <= 1");
}

Risk classify_risk(double ate, const RiskThresholds& thresholds) {
    if (ate >= thresholds.high) return Risk::High;
    if (ate >= thresholds.moderate) return Risk::Moderate;
    return Risk::Low;
}

std::string_view velocity_mode_name(VelocityMode m) {
    return m == VelocityMode::Residence ? "residence" : "remote-adjusted";
}

VelocityMode parse_velocity_mode(std::string_view s) {
    if (s == "residence") return VelocityMode::Residence;
    if (s == "remote-adjusted" || s == "remote_adjusted") return VelocityMode::RemoteAdjusted;
    throw Error("scoring: velocity mode must be residence|remote-adjusted, got '" +
                std::string(s) + "'");
}

const RegionConfig& ScoreModel::region(std::string_view region_id) const {
    for (const auto& r : regions)
        if (r.region_id == region_id) return r;
    throw Error("scoring: unknown region '" + std::string(region_id) + "'");
}

double ScoreModel::velocity(const RegionConfig& region, std::string_view soc_major_group,
                            double tau) const {
    if (mode == VelocityMode::Residence) return logistic_v(tiers.tier(region.tier), tau);
    double r_o = telework.r_for_group(soc_major_group);
    const std::vector<double>& pi = tier_shares.pi_for_group(soc_major_group);
    return v_eff(r_o, pi, tiers, region.tier, tau);
}

AteRecord make_ate(const OccupationScore& occ, const RegionConfig& region, double tau,
                   const ScoreModel& model) {
    AteRecord rec;
    rec.soc_code = occ.soc_code;
    rec.region_id = region.region_id;
    rec.tau = tau;
    rec.base_score = occ.base_score;
    rec.ate = occ.base_score * model.velocity(region, soc_major_group(occ.soc_code), tau);
    rec.risk = classify_risk(rec.ate, model.thresholds);
    rec.audit = &occ;
    return rec;
}

namespace {

OccupationScore score_one_occupation(std::span<const TaskRecord> tasks, const Dataset& data,
                                     const AbilityMap& amap,
                                     const std::vector<TextModifierRule>& rules,
                                     const CovRubric& rubric, UnmappedAbilityPolicy policy) {
    const std::string& soc = tasks.front().soc_code;
    const AbilityProfile* profile = data.profile_for(soc);
    if (!profile)
        throw Error("scoring: no ability profile for occupation " + soc);

    std::vector<TaskWeight> weights = compute_weights(tasks);
    OccupationScore occ;
    occ.soc_code = soc;
    if (auto it = data.titles.find(soc); it != data.titles.end()) occ.title = it->second;

    std::vector<double> w, cap, cov;
    w.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        double c = cap_for_task(tasks[i], *profile, amap, rules, policy);
        double v = score_cov(tasks[i].text, rubric, tasks[i].task_id).cov;
        w.push_back(weights[i].w);
        cap.push_back(c);
        cov.push_back(v);
        occ.components.push_back({tasks[i].task_id, weights[i].w, c, v});
    }
    occ.base_score = base_ate(w, cap, cov);
    return occ;
}

} // namespace

std::vector<OccupationScore> compute_base_scores(const Dataset& data, const AbilityMap& amap,
                                                 const std::vector<TextModifierRule>& rules,
                                                 const CovRubric& rubric,
                                                 UnmappedAbilityPolicy policy,
                                                 unsigned parallelism) {
    rubric.validate();
    for (const auto& rule : rules) rule.validate();

    // Tasks are sorted by (soc, task_id); slice per occupation.
    std::vector<std::span<const TaskRecord>> slices;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= data.tasks.size(); ++i) {
        if (i == data.tasks.size() || data.tasks[i].soc_code != data.tasks[start].soc_code) {
            slices.push_back(std::span(data.tasks).subspan(start, i - start));
            start = i;
        }
    }

    std::vector<OccupationScore> out(slices.size());
    if (slices.empty()) return out;

    unsigned workers = parallelism == 0 ? std::thread::hardware_concurrency() : parallelism;
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(slices.size()));

    // Fixed slice -> slot assignment keeps output independent of worker count.
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run_range = [&](std::size_t lo, std::size_t hi) {
        try {
            for (std::size_t i = lo; i < hi; ++i)
                out[i] = score_one_occupation(slices[i], data, amap, rules, rubric, policy);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (workers <= 1) {
        run_range(0, slices.size());
    } else {
        std::vector<std::thread> threads;
        std::size_t chunk = (slices.size() + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            std::size_t lo = t * chunk;
            std::size_t hi = std::min(slices.size(), lo + chunk);
            if (lo >= hi) break;
            threads.emplace_back(run_range, lo, hi);
        }
        for (auto& th : threads) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

std::vector<AteRecord> score_grid(std::span<const OccupationScore> occupations,
                                  const ScoreModel& model, std::span<const double> taus) {
    model.thresholds.validate();
    model.tiers.validate();
    std::vector<AteRecord> out;
    out.reserve(occupations.size() * model.regions.size() * taus.size());
    for (const auto& region : model.regions)
        for (double tau : taus)
            for (const auto& occ : occupations) out.push_back(make_ate(occ, region, tau, model));
    return out;
}

std::vector<ShareRow> regional_share_table(std::span<const AteRecord> records, double threshold) {
    if (records.empty()) return {};
    double tau = records.front().tau;
    struct Agg {
        std::size_t n = 0, crossing = 0;
        double sum = 0;
    };
    std::map<std::pair<std::string, std::string>, Agg> groups;
    for (const auto& rec : records) {
        if (rec.tau != tau)
            throw Error("scoring: regional_share_table needs records for a single tau (saw " +
                        fmt_shortest(tau) + " and " + fmt_shortest(rec.tau) + ")");
        auto& agg = groups[{rec.region_id, soc_major_group(rec.soc_code)}];
        ++agg.n;
        agg.sum += rec.ate;
        if (rec.ate >= threshold) ++agg.crossing;
    }
    std::vector<ShareRow> out;
    for (const auto& [key, agg] : groups) {
        ShareRow row;
        row.region_id = key.first;
        row.soc_major_group = key.second;
        row.n_occupations = agg.n;
        row.n_crossing = agg.crossing;
        row.share_pct = 100.0 * static_cast<double>(agg.crossing) / static_cast<double>(agg.n);
        row.mean_ate = agg.sum / static_cast<double>(agg.n);
        out.push_back(std::move(row));
    }
    return out;
}

std::size_t Histogram::total() const {
    std::size_t sum = 0;
    for (std::size_t c : counts) sum += c;
    return sum;
}

namespace {

// Largest i with i*width <= x; the post-correction keeps edge values in the
// right-open bin that starts there despite floating-point division error.
long long bin_index(double x, double width) {
    auto i = static_cast<long long>(std::floor(x / width));
    while (static_cast<double>(i + 1) * width <= x) ++i;
    while (static_cast<double>(i) * width > x) --i;
    return i;
}

} // namespace

Histogram histogram(std::span<const AteRecord> records, double bin_width) {
    if (!(bin_width > 0.0)) throw Error("scoring: histogram bin width must be positive");
    Histogram h;
    h.bin_width = bin_width;
    if (records.empty()) return h;

    long long lo = bin_index(records.front().ate, bin_width);
    long long hi = lo;
    for (const auto& rec : records) {
        long long b = bin_index(rec.ate, bin_width);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    h.first_bin = lo;
    h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (const auto& rec : records)
        ++h.counts[static_cast<std::size_t>(bin_index(rec.ate, bin_width) - lo)];
    return h;
}

} // namespace ate
