#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ate {

// One occupational task statement with its ratings.
struct TaskRecord {
    std::string soc_code;  // e.g. "13-2041", optional ".NN" detail suffix kept verbatim
    std::string task_id;
    std::string text;      // non-empty after trim
    double importance = 0; // [1, 5]
    double relevance = 0;  // [0, 100]
};

struct AbilityProfile {
    std::string soc_code;
    std::vector<std::pair<std::string, double>> entries; // (ability name, importance in [1,5])
};

struct EmploymentRecord {
    std::string soc_code;
    std::string region_id;
    long long employment = 0; // >= 0
};

struct TeleworkRow {
    std::string soc_major_group; // 2-digit group
    double r_o = 0;              // telework proportion in [0,1]
};

struct TeleworkTable {
    std::vector<TeleworkRow> rows;
    // Throws ate::Error when the group is absent.
    double r_for_group(std::string_view group) const;
    bool has_group(std::string_view group) const;
};

struct TierShareRow {
    std::string soc_major_group;
    std::vector<double> pi; // shares over tiers 1..3, normalized to sum 1 on load
};

struct TierShareTable {
    std::vector<TierShareRow> rows;
    const std::vector<double>& pi_for_group(std::string_view group) const;
    bool has_group(std::string_view group) const;
};

// Immutable after load; shared read-only across scoring workers.
struct Dataset {
    std::vector<TaskRecord> tasks;                  // sorted by (soc_code, task_id)
    std::vector<AbilityProfile> profiles;           // sorted by soc_code
    std::vector<EmploymentRecord> employment;       // sorted by (soc_code, region_id)
    TeleworkTable telework;
    TierShareTable tier_shares;
    std::map<std::string, std::string> titles;      // soc_code -> display title (optional)

    const AbilityProfile* profile_for(std::string_view soc) const;
    void sort_all();
};

// First two digits of a SOC code ("13-2041.07" -> "13"). Throws on malformed codes.
std::string soc_major_group(std::string_view soc_code);

} // namespace ate
