#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ate/types.hpp"

namespace ate {

// Maps source-file column names onto the normalized schema. Vendor exports
// (O*NET 30.2 tab-delimited, BLS CSV) are adapted by overriding these names;
// the defaults are the normalized dump layout.
struct TaskColumnMap {
    std::string soc = "soc_code";
    std::string id = "task_id";
    std::string text = "text";
    std::string importance = "importance";
    std::string relevance = "relevance";
    std::string title; // optional; collected into Dataset::titles when set
};

struct ProfileColumnMap {
    std::string soc = "soc_code";
    std::string ability = "ability_name";
    std::string importance = "importance";
};

struct EmploymentColumnMap {
    std::string soc = "soc_code";
    std::string region = "region_id";
    std::string employment = "employment";
};

struct Reject {
    std::string source;
    std::size_t line = 0; // 1-based line in the source file
    std::string reason;
};

struct ParseReport {
    std::size_t input_rows = 0; // data rows seen (header excluded)
    std::vector<Reject> rejects;
    std::size_t accepted() const { return input_rows - rejects.size(); }
};

// Each parser validates row-by-row: rows failing range or format checks land
// in the report, never silently dropped. A missing mandatory column is a
// fatal schema error (ate::Error).
std::vector<TaskRecord> parse_task_corpus(std::istream& in, const TaskColumnMap& schema,
                                          ParseReport& report,
                                          std::map<std::string, std::string>* titles = nullptr,
                                          const std::string& source_name = "<stream>");

std::vector<AbilityProfile> parse_ability_profiles(std::istream& in, const ProfileColumnMap& schema,
                                                   ParseReport& report,
                                                   const std::string& source_name = "<stream>");

std::vector<EmploymentRecord> parse_employment(std::istream& in, const EmploymentColumnMap& schema,
                                               ParseReport& report,
                                               const std::string& source_name = "<stream>");

TeleworkTable parse_telework(std::istream& in, ParseReport& report,
                             const std::string& source_name = "<stream>");

// Normalizes pi to sum exactly 1 on load; rejects rows with components
// outside [0,1] or a non-positive sum.
TierShareTable parse_tier_shares(std::istream& in, ParseReport& report,
                                 const std::string& source_name = "<stream>");

// Normalized dump format: one file per table, columns exactly as in the type
// definitions, rows sorted by (soc_code, task_id). Numeric fields use
// shortest round-trip formatting so a dump re-parses to identical records.
void write_normalized_tasks(std::ostream& out, std::span<const TaskRecord> tasks);
void write_normalized_profiles(std::ostream& out, std::span<const AbilityProfile> profiles);
void write_normalized_employment(std::ostream& out, std::span<const EmploymentRecord> records);
void write_normalized_telework(std::ostream& out, const TeleworkTable& table);
void write_normalized_tier_shares(std::ostream& out, const TierShareTable& table);
void write_normalized_titles(std::ostream& out, const std::map<std::string, std::string>& titles);
void write_reject_report(std::ostream& out, std::span<const Reject> rejects);

std::map<std::string, std::string> parse_titles(std::istream& in, ParseReport& report,
                                                const std::string& source_name = "<stream>");

} // namespace ate
