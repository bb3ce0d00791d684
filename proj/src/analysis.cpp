#include "ate/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ate/dsv.hpp"
#include "ate/error.hpp"
#include "ate/text.hpp"

namespace ate {

std::vector<ScenarioSpec> load_scenarios_file(const std::string& path) {
    DsvTable table = read_dsv_file(path);
    int c_name = table.column_index("name");
    int c_k1 = table.column_index("k_tier1");
    int c_k2 = table.column_index("k_tier2");
    int c_k3 = table.column_index("k_tier3");
    if (c_name < 0 || c_k1 < 0 || c_k2 < 0 || c_k3 < 0)
        throw Error("analysis: " + path + ": scenarios need columns name, k_tier1..k_tier3");
    std::vector<ScenarioSpec> out;
    for (const auto& row : table.rows) {
        ScenarioSpec s;
        s.name = std::string(trim(row.fields[static_cast<std::size_t>(c_name)]));
        auto k1 = parse_double(row.fields[static_cast<std::size_t>(c_k1)]);
        auto k2 = parse_double(row.fields[static_cast<std::size_t>(c_k2)]);
        auto k3 = parse_double(row.fields[static_cast<std::size_t>(c_k3)]);
        if (s.name.empty() || !k1 || !k2 || !k3 || *k1 <= 0 || *k2 <= 0 || *k3 <= 0)
            throw Error("analysis: " + path + ": bad scenario row at line " + std::to_string(row.line));
        s.k = {*k1, *k2, *k3};
        out.push_back(std::move(s));
    }
    if (out.empty()) throw Error("analysis: " + path + ": no scenarios defined");
    return out;
}

std::vector<KStressCell> k_stress(std::span<const OccupationScore> occupations,
                                  std::span<const ScenarioSpec> scenarios,
                                  std::span<const int> years, double threshold,
                                  const TierSet& baseline) {
    baseline.validate();
    std::vector<KStressCell> out;
    for (int tier = 1; tier <= 3; ++tier) {
        for (const auto& scenario : scenarios) {
            TierParams params = baseline.tier(tier);
            params.k = scenario.k[static_cast<std::size_t>(tier - 1)];
            params.validate();
            for (int year : years) {
                double v = logistic_v(params, static_cast<double>(year));
                KStressCell cell;
                cell.tier = tier;
                cell.scenario = scenario.name;
                cell.year = year;
                cell.n_occupations = occupations.size();
                for (const auto& occ : occupations)
                    if (occ.base_score * v >= threshold) ++cell.n_crossing;
                cell.pct = occupations.empty()
                               ? 0.0
                               : 100.0 * static_cast<double>(cell.n_crossing) /
                                     static_cast<double>(cell.n_occupations);
                out.push_back(std::move(cell));
            }
        }
    }
    return out;
}

std::string_view oat_param_name(OatParam p) {
    switch (p) {
    case OatParam::K: return "k";
    case OatParam::Tau0: return "tau0";
    case OatParam::L: return "L";
    case OatParam::CovMultipliers: return "cov_multipliers";
    case OatParam::CapUniform: return "cap_uniform";
    }
    throw Error("analysis: invalid sensitivity parameter");
}

namespace {

// Ranking of occupations by (score desc, soc asc); used for the rank-change flag.
std::vector<std::size_t> occupation_order(std::span<const OccupationScore> occs,
                                          const std::vector<double>& scores) {
    std::vector<std::size_t> order(occs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return occs[a].soc_code < occs[b].soc_code;
    });
    return order;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

OatReport oat_sensitivity(OatParam param, const OatPerturbation& p, const OatContext& ctx) {
    if (!ctx.model) throw Error("analysis: sensitivity context missing score model");
    const ScoreModel& model = *ctx.model;
    const RegionConfig& region = model.region(ctx.region_id);

    OatReport report;
    report.param = param;
    report.perturbation = p.value;
    report.relative = p.relative;

    TierParams base_params = model.tiers.tier(region.tier);
    report.v_before = logistic_v(base_params, ctx.tau);

    std::vector<double> ate_before;
    ate_before.reserve(ctx.baseline.size());
    for (const auto& occ : ctx.baseline) ate_before.push_back(occ.base_score * report.v_before);

    std::vector<double> ate_after;
    switch (param) {
    case OatParam::K:
    case OatParam::Tau0:
    case OatParam::L: {
        TierParams perturbed = base_params;
        double* field = param == OatParam::K ? &perturbed.k
                        : param == OatParam::Tau0 ? &perturbed.tau0
                                                  : &perturbed.L;
        *field = p.relative ? *field * p.value : *field + p.value;
        perturbed.validate(); // rejects L > 1, k <= 0, ...
        report.v_after = logistic_v(perturbed, ctx.tau);
        for (const auto& occ : ctx.baseline) ate_after.push_back(occ.base_score * report.v_after);
        break;
    }
    case OatParam::CovMultipliers: {
        if (!ctx.data || !ctx.ability_map || !ctx.modifier_rules || !ctx.rubric)
            throw Error("analysis: cov sensitivity needs corpus context");
        if (!p.relative)
            throw Error("analysis: cov_multipliers perturbation must be relative (penalty scale)");
        CovRubric scaled = ctx.rubric->with_scaled_penalties(p.value);
        auto repriced = compute_base_scores(*ctx.data, *ctx.ability_map, *ctx.modifier_rules,
                                            scaled, ctx.policy, 1);
        report.v_after = report.v_before;
        for (const auto& occ : repriced) ate_after.push_back(occ.base_score * report.v_after);
        break;
    }
    case OatParam::CapUniform: {
        if (!ctx.data || !ctx.ability_map || !ctx.modifier_rules || !ctx.rubric)
            throw Error("analysis: cap sensitivity needs corpus context");
        if (!p.relative)
            throw Error("analysis: cap_uniform perturbation must be relative");
        AbilityMap scaled = ctx.ability_map->scaled(p.value);
        auto repriced = compute_base_scores(*ctx.data, scaled, *ctx.modifier_rules, *ctx.rubric,
                                            ctx.policy, 1);
        report.v_after = report.v_before;
        for (const auto& occ : repriced) ate_after.push_back(occ.base_score * report.v_after);
        break;
    }
    }

    if (ate_after.size() != ate_before.size())
        throw Error("analysis: sensitivity repricing changed the occupation set");

    report.mean_ate_before = mean(ate_before);
    report.mean_ate_after = mean(ate_after);
    if (!ate_before.empty()) {
        report.top_ate_before = *std::max_element(ate_before.begin(), ate_before.end());
        report.top_ate_after = *std::max_element(ate_after.begin(), ate_after.end());
        report.rank_changed =
            occupation_order(ctx.baseline, ate_before) != occupation_order(ctx.baseline, ate_after);
    }
    return report;
}

namespace {

std::vector<double> midranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error("analysis: spearman inputs have different lengths (" +
                    std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    if (x.size() < 2) throw Error("analysis: spearman needs at least 2 observations");

    std::vector<double> rx = midranks(x);
    std::vector<double> ry = midranks(y);
    auto n = static_cast<double>(x.size());
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        double dx = rx[i] - mx, dy = ry[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx == 0.0 || vy == 0.0)
        throw Error("analysis: spearman undefined for a constant vector (zero rank variance)");
    return cov / std::sqrt(vx * vy);
}

void ReinstatementScenario::validate() const {
    if (base_workers < 0) throw Error("analysis: reinstatement base_workers must be >= 0");
    if (conversion < 0.0 || conversion > 1.0)
        throw Error("analysis: conversion proportion outside [0,1]");
    if (reinstatement_low < 0.0 || reinstatement_high > 1.0 ||
        reinstatement_low > reinstatement_high)
        throw Error("analysis: reinstatement ratios must satisfy 0 <= low <= high <= 1");
}

ReinstatementBounds reinstatement_bounds(const ReinstatementScenario& s) {
    s.validate();
    ReinstatementBounds b;
    b.displaced = s.base_workers * s.conversion;
    b.reinstated_low = b.displaced * s.reinstatement_low;
    b.reinstated_high = b.displaced * s.reinstatement_high;
    return b;
}

long long round_to_thousand(double v) {
    return static_cast<long long>(std::llround(v / 1000.0)) * 1000;
}

std::vector<ReinstatementScenario> load_reinstatement_file(const std::string& path) {
    DsvTable table = read_dsv_file(path);
    int c_name = table.column_index("name");
    int c_base = table.column_index("base_workers");
    int c_conv = table.column_index("conversion");
    int c_lo = table.column_index("reinstatement_low");
    int c_hi = table.column_index("reinstatement_high");
    if (c_name < 0 || c_base < 0 || c_conv < 0 || c_lo < 0 || c_hi < 0)
        throw Error("analysis: " + path + ": reinstatement table needs columns name, base_workers, "
                    "conversion, reinstatement_low, reinstatement_high");
    std::vector<ReinstatementScenario> out;
    for (const auto& row : table.rows) {
        ReinstatementScenario s;
        s.name = std::string(trim(row.fields[static_cast<std::size_t>(c_name)]));
        auto base = parse_double(row.fields[static_cast<std::size_t>(c_base)]);
        auto conv = parse_double(row.fields[static_cast<std::size_t>(c_conv)]);
        auto lo = parse_double(row.fields[static_cast<std::size_t>(c_lo)]);
        auto hi = parse_double(row.fields[static_cast<std::size_t>(c_hi)]);
        if (!base || !conv || !lo || !hi)
            throw Error("analysis: " + path + ": bad reinstatement row at line " +
                        std::to_string(row.line));
        s.base_workers = *base;
        s.conversion = *conv;
        s.reinstatement_low = *lo;
        s.reinstatement_high = *hi;
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

std::map<std::string, double> load_index_file(const std::string& path) {
    DsvTable table = read_dsv_file(path);
    int c_soc = table.column_index("soc_code");
    int c_score = table.column_index("score");
    if (c_soc < 0 || c_score < 0)
        throw Error("analysis: " + path + ": index file needs columns soc_code, score");
    std::map<std::string, double> out;
    for (const auto& row : table.rows) {
        std::string soc(trim(row.fields[static_cast<std::size_t>(c_soc)]));
        auto score = parse_double(row.fields[static_cast<std::size_t>(c_score)]);
        if (soc.empty() || !score)
            throw Error("analysis: " + path + ": bad index row at line " + std::to_string(row.line));
        out[soc] = *score;
    }
    return out;
}

IndexValidation correlate_with_index(const std::string& index_name,
                                     const std::map<std::string, double>& occupation_scores,
                                     const std::map<std::string, double>& index_scores) {
    std::vector<double> ours, theirs;
    for (const auto& [soc, score] : occupation_scores) {
        auto it = index_scores.find(soc);
        if (it == index_scores.end()) continue;
        ours.push_back(score);
        theirs.push_back(it->second);
    }
    IndexValidation out;
    out.index_name = index_name;
    out.matched = ours.size();
    if (ours.size() < 2)
        throw Error("analysis: index '" + index_name + "' matches fewer than 2 occupations");
    out.rho = spearman(ours, theirs);
    return out;
}

} // namespace ate
