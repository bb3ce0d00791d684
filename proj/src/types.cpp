#include "ate/types.hpp"

#include <algorithm>
#include <cctype>

#include "ate/error.hpp"

namespace ate {

double TeleworkTable::r_for_group(std::string_view group) const {
    for (const auto& row : rows)
        if (row.soc_major_group == group) return row.r_o;
    throw Error("ingest: telework table has no row for major group '" + std::string(group) + "'");
}

bool TeleworkTable::has_group(std::string_view group) const {
    return std::any_of(rows.begin(), rows.end(),
                       [&](const TeleworkRow& r) { return r.soc_major_group == group; });
}

const std::vector<double>& TierShareTable::pi_for_group(std::string_view group) const {
    for (const auto& row : rows)
        if (row.soc_major_group == group) return row.pi;
    throw Error("ingest: tier-share table has no row for major group '" + std::string(group) + "'");
}

bool TierShareTable::has_group(std::string_view group) const {
    return std::any_of(rows.begin(), rows.end(),
                       [&](const TierShareRow& r) { return r.soc_major_group == group; });
}

const AbilityProfile* Dataset::profile_for(std::string_view soc) const {
    auto it = std::lower_bound(profiles.begin(), profiles.end(), soc,
                               [](const AbilityProfile& p, std::string_view s) {
                                   return p.soc_code < s;
                               });
    if (it != profiles.end() && it->soc_code == soc) return &*it;
    return nullptr;
}

void Dataset::sort_all() {
    std::sort(tasks.begin(), tasks.end(), [](const TaskRecord& a, const TaskRecord& b) {
        if (a.soc_code != b.soc_code) return a.soc_code < b.soc_code;
        return a.task_id < b.task_id;
    });
    std::sort(profiles.begin(), profiles.end(),
              [](const AbilityProfile& a, const AbilityProfile& b) {
                  return a.soc_code < b.soc_code;
              });
    std::sort(employment.begin(), employment.end(),
              [](const EmploymentRecord& a, const EmploymentRecord& b) {
                  if (a.soc_code != b.soc_code) return a.soc_code < b.soc_code;
                  return a.region_id < b.region_id;
              });
    std::sort(tier_shares.rows.begin(), tier_shares.rows.end(),
              [](const TierShareRow& a, const TierShareRow& b) {
                  return a.soc_major_group < b.soc_major_group;
              });
    std::sort(telework.rows.begin(), telework.rows.end(),
              [](const TeleworkRow& a, const TeleworkRow& b) {
                  return a.soc_major_group < b.soc_major_group;
              });
}

std::string soc_major_group(std::string_view soc_code) {
    if (soc_code.size() < 2 || !std::isdigit(static_cast<unsigned char>(soc_code[0])) ||
        !std::isdigit(static_cast<unsigned char>(soc_code[1])))
        throw Error("ingest: malformed SOC code '" + std::string(soc_code) + "'");
    return std::string(soc_code.substr(0, 2));
}

} // namespace ate
