#include "ate/ingest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "ate/dsv.hpp"
#include "ate/error.hpp"
#include "ate/text.hpp"

namespace ate {

namespace {

int require_column(const DsvTable& table, const std::string& name, const std::string& source,
                   const char* table_kind) {
    int idx = table.column_index(name);
    if (idx < 0)
        throw Error("ingest: " + source + ": " + table_kind + " schema is missing mandatory column '" +
                    name + "'");
    return idx;
}

void reject(ParseReport& report, const std::string& source, std::size_t line, std::string reason) {
    report.rejects.push_back({source, line, std::move(reason)});
}

// Fields beyond the header width are a row-level defect, not fatal.
const std::string* field_at(const DsvRow& row, int idx) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= row.fields.size()) return nullptr;
    return &row.fields[static_cast<std::size_t>(idx)];
}

} // namespace

std::vector<TaskRecord> parse_task_corpus(std::istream& in, const TaskColumnMap& schema,
                                          ParseReport& report,
                                          std::map<std::string, std::string>* titles,
                                          const std::string& source_name) {
    DsvTable table = read_dsv(in, source_name);
    int c_soc = require_column(table, schema.soc, source_name, "task");
    int c_id = require_column(table, schema.id, source_name, "task");
    int c_text = require_column(table, schema.text, source_name, "task");
    int c_imp = require_column(table, schema.importance, source_name, "task");
    int c_rel = require_column(table, schema.relevance, source_name, "task");
    int c_title = schema.title.empty() ? -1 : require_column(table, schema.title, source_name, "task");

    std::vector<TaskRecord> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : table.rows) {
        ++report.input_rows;
        const std::string* soc = field_at(row, c_soc);
        const std::string* id = field_at(row, c_id);
        const std::string* text = field_at(row, c_text);
        const std::string* imp = field_at(row, c_imp);
        const std::string* rel = field_at(row, c_rel);
        if (!soc || !id || !text || !imp || !rel) {
            reject(report, source_name, row.line, "row has fewer fields than the header");
            continue;
        }
        TaskRecord rec;
        rec.soc_code = std::string(trim(*soc));
        rec.task_id = std::string(trim(*id));
        rec.text = std::string(trim(*text));
        if (rec.soc_code.empty()) { reject(report, source_name, row.line, "empty soc_code"); continue; }
        if (rec.task_id.empty()) { reject(report, source_name, row.line, "empty task_id"); continue; }
        if (rec.text.empty()) { reject(report, source_name, row.line, "empty task text"); continue; }

        auto imp_v = parse_double(*imp);
        if (!imp_v) { reject(report, source_name, row.line, "unparseable importance '" + *imp + "'"); continue; }
        auto rel_v = parse_double(*rel);
        if (!rel_v) { reject(report, source_name, row.line, "unparseable relevance '" + *rel + "'"); continue; }
        if (*imp_v < 1.0 || *imp_v > 5.0) {
            reject(report, source_name, row.line, "importance " + fmt_shortest(*imp_v) + " outside [1,5]");
            continue;
        }
        if (*rel_v < 0.0 || *rel_v > 100.0) {
            reject(report, source_name, row.line, "relevance " + fmt_shortest(*rel_v) + " outside [0,100]");
            continue;
        }
        if (!seen.emplace(rec.soc_code, rec.task_id).second) {
            reject(report, source_name, row.line,
                   "duplicate (soc_code, task_id) = (" + rec.soc_code + ", " + rec.task_id + ")");
            continue;
        }
        rec.importance = *imp_v;
        rec.relevance = *rel_v;
        if (titles && c_title >= 0) {
            if (const std::string* t = field_at(row, c_title); t && !trim(*t).empty())
                titles->emplace(rec.soc_code, std::string(trim(*t)));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<AbilityProfile> parse_ability_profiles(std::istream& in, const ProfileColumnMap& schema,
                                                   ParseReport& report,
                                                   const std::string& source_name) {
    DsvTable table = read_dsv(in, source_name);
    int c_soc = require_column(table, schema.soc, source_name, "profile");
    int c_ab = require_column(table, schema.ability, source_name, "profile");
    int c_imp = require_column(table, schema.importance, source_name, "profile");

    std::map<std::string, AbilityProfile> by_soc;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : table.rows) {
        ++report.input_rows;
        const std::string* soc = field_at(row, c_soc);
        const std::string* ab = field_at(row, c_ab);
        const std::string* imp = field_at(row, c_imp);
        if (!soc || !ab || !imp) {
            reject(report, source_name, row.line, "row has fewer fields than the header");
            continue;
        }
        std::string soc_s(trim(*soc)), ab_s(trim(*ab));
        if (soc_s.empty()) { reject(report, source_name, row.line, "empty soc_code"); continue; }
        if (ab_s.empty()) { reject(report, source_name, row.line, "empty ability_name"); continue; }
        auto imp_v = parse_double(*imp);
        if (!imp_v) { reject(report, source_name, row.line, "unparseable importance '" + *imp + "'"); continue; }
        if (*imp_v < 1.0 || *imp_v > 5.0) {
            reject(report, source_name, row.line, "importance " + fmt_shortest(*imp_v) + " outside [1,5]");
            continue;
        }
        if (!seen.emplace(soc_s, ab_s).second) {
            reject(report, source_name, row.line, "duplicate ability '" + ab_s + "' for " + soc_s);
            continue;
        }
        auto& prof = by_soc[soc_s];
        prof.soc_code = soc_s;
        prof.entries.emplace_back(ab_s, *imp_v);
    }

    std::vector<AbilityProfile> out;
    out.reserve(by_soc.size());
    for (auto& [soc, prof] : by_soc) out.push_back(std::move(prof));
    return out;
}

std::vector<EmploymentRecord> parse_employment(std::istream& in, const EmploymentColumnMap& schema,
                                               ParseReport& report,
                                               const std::string& source_name) {
    DsvTable table = read_dsv(in, source_name);
    int c_soc = require_column(table, schema.soc, source_name, "employment");
    int c_reg = require_column(table, schema.region, source_name, "employment");
    int c_emp = require_column(table, schema.employment, source_name, "employment");

    std::vector<EmploymentRecord> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : table.rows) {
        ++report.input_rows;
        const std::string* soc = field_at(row, c_soc);
        const std::string* reg = field_at(row, c_reg);
        const std::string* emp = field_at(row, c_emp);
        if (!soc || !reg || !emp) {
            reject(report, source_name, row.line, "row has fewer fields than the header");
            continue;
        }
        EmploymentRecord rec;
        rec.soc_code = std::string(trim(*soc));
        rec.region_id = std::string(trim(*reg));
        if (rec.soc_code.empty()) { reject(report, source_name, row.line, "empty soc_code"); continue; }
        if (rec.region_id.empty()) { reject(report, source_name, row.line, "empty region_id"); continue; }
        auto e = parse_long(*emp);
        if (!e) { reject(report, source_name, row.line, "unparseable employment '" + *emp + "'"); continue; }
        if (*e < 0) { reject(report, source_name, row.line, "negative employment"); continue; }
        if (!seen.emplace(rec.soc_code, rec.region_id).second) {
            reject(report, source_name, row.line,
                   "duplicate (soc_code, region_id) = (" + rec.soc_code + ", " + rec.region_id + ")");
            continue;
        }
        rec.employment = *e;
        out.push_back(std::move(rec));
    }
    return out;
}

TeleworkTable parse_telework(std::istream& in, ParseReport& report,
                             const std::string& source_name) {
    DsvTable table = read_dsv(in, source_name);
    int c_group = require_column(table, "soc_major_group", source_name, "telework");
    int c_r = require_column(table, "r_o", source_name, "telework");

    TeleworkTable out;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        ++report.input_rows;
        const std::string* group = field_at(row, c_group);
        const std::string* r = field_at(row, c_r);
        if (!group || !r) {
            reject(report, source_name, row.line, "row has fewer fields than the header");
            continue;
        }
        std::string g(trim(*group));
        auto r_v = parse_double(*r);
        if (g.empty()) { reject(report, source_name, row.line, "empty soc_major_group"); continue; }
        if (!r_v) { reject(report, source_name, row.line, "unparseable r_o '" + *r + "'"); continue; }
        if (*r_v < 0.0 || *r_v > 1.0) {
            reject(report, source_name, row.line, "r_o " + fmt_shortest(*r_v) + " outside [0,1]");
            continue;
        }
        if (!seen.insert(g).second) {
            reject(report, source_name, row.line, "duplicate telework row for group " + g);
            continue;
        }
        out.rows.push_back({g, *r_v});
    }
    return out;
}

TierShareTable parse_tier_shares(std::istream& in, ParseReport& report,
                                 const std::string& source_name) {
    DsvTable table = read_dsv(in, source_name);
    int c_group = require_column(table, "soc_major_group", source_name, "tier-share");
    int c_pi1 = require_column(table, "pi_tier1", source_name, "tier-share");
    int c_pi2 = require_column(table, "pi_tier2", source_name, "tier-share");
    int c_pi3 = require_column(table, "pi_tier3", source_name, "tier-share");

    TierShareTable out;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        ++report.input_rows;
        const std::string* group = field_at(row, c_group);
        const std::string* p1 = field_at(row, c_pi1);
        const std::string* p2 = field_at(row, c_pi2);
        const std::string* p3 = field_at(row, c_pi3);
        if (!group || !p1 || !p2 || !p3) {
            reject(report, source_name, row.line, "row has fewer fields than the header");
            continue;
        }
        std::string g(trim(*group));
        if (g.empty()) { reject(report, source_name, row.line, "empty soc_major_group"); continue; }
        std::vector<double> pi(3);
        bool ok = true;
        const std::string* raw[3] = {p1, p2, p3};
        for (int i = 0; i < 3 && ok; ++i) {
            auto v = parse_double(*raw[i]);
            if (!v) { reject(report, source_name, row.line, "unparseable tier share '" + *raw[i] + "'"); ok = false; break; }
            if (*v < 0.0 || *v > 1.0) {
                reject(report, source_name, row.line, "tier share " + fmt_shortest(*v) + " outside [0,1]");
                ok = false;
                break;
            }
            pi[static_cast<std::size_t>(i)] = *v;
        }
        if (!ok) continue;
        double sum = pi[0] + pi[1] + pi[2];
        if (sum <= 0.0) { reject(report, source_name, row.line, "tier shares sum to zero"); continue; }
        for (double& v : pi) v /= sum; // normalize on load
        if (!seen.insert(g).second) {
            reject(report, source_name, row.line, "duplicate tier-share row for group " + g);
            continue;
        }
        out.rows.push_back({g, std::move(pi)});
    }
    return out;
}

std::map<std::string, std::string> parse_titles(std::istream& in, ParseReport& report,
                                                const std::string& source_name) {
    DsvTable table = read_dsv(in, source_name);
    int c_soc = require_column(table, "soc_code", source_name, "titles");
    int c_title = require_column(table, "title", source_name, "titles");
    std::map<std::string, std::string> out;
    for (const auto& row : table.rows) {
        ++report.input_rows;
        const std::string* soc = field_at(row, c_soc);
        const std::string* title = field_at(row, c_title);
        if (!soc || !title) {
            reject(report, source_name, row.line, "row has fewer fields than the header");
            continue;
        }
        std::string s(trim(*soc));
        if (s.empty()) { reject(report, source_name, row.line, "empty soc_code"); continue; }
        out[s] = std::string(trim(*title));
    }
    return out;
}

void write_normalized_tasks(std::ostream& out, std::span<const TaskRecord> tasks) {
    std::vector<const TaskRecord*> sorted;
    sorted.reserve(tasks.size());
    for (const auto& t : tasks) sorted.push_back(&t);
    std::sort(sorted.begin(), sorted.end(), [](const TaskRecord* a, const TaskRecord* b) {
        if (a->soc_code != b->soc_code) return a->soc_code < b->soc_code;
        return a->task_id < b->task_id;
    });
    std::vector<std::vector<std::string>> rows;
    rows.reserve(sorted.size());
    for (const TaskRecord* t : sorted)
        rows.push_back({t->soc_code, t->task_id, t->text, fmt_shortest(t->importance),
                        fmt_shortest(t->relevance)});
    write_dsv(out, {"soc_code", "task_id", "text", "importance", "relevance"}, rows);
}

void write_normalized_profiles(std::ostream& out, std::span<const AbilityProfile> profiles) {
    std::vector<const AbilityProfile*> sorted;
    for (const auto& p : profiles) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(),
              [](const AbilityProfile* a, const AbilityProfile* b) { return a->soc_code < b->soc_code; });
    std::vector<std::vector<std::string>> rows;
    for (const AbilityProfile* p : sorted) {
        auto entries = p->entries;
        std::sort(entries.begin(), entries.end());
        for (const auto& [name, imp] : entries)
            rows.push_back({p->soc_code, name, fmt_shortest(imp)});
    }
    write_dsv(out, {"soc_code", "ability_name", "importance"}, rows);
}

void write_normalized_employment(std::ostream& out, std::span<const EmploymentRecord> records) {
    std::vector<const EmploymentRecord*> sorted;
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const EmploymentRecord* a, const EmploymentRecord* b) {
                  if (a->soc_code != b->soc_code) return a->soc_code < b->soc_code;
                  return a->region_id < b->region_id;
              });
    std::vector<std::vector<std::string>> rows;
    for (const EmploymentRecord* r : sorted)
        rows.push_back({r->soc_code, r->region_id, std::to_string(r->employment)});
    write_dsv(out, {"soc_code", "region_id", "employment"}, rows);
}

void write_normalized_telework(std::ostream& out, const TeleworkTable& table) {
    auto rows_sorted = table.rows;
    std::sort(rows_sorted.begin(), rows_sorted.end(),
              [](const TeleworkRow& a, const TeleworkRow& b) {
                  return a.soc_major_group < b.soc_major_group;
              });
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rows_sorted) rows.push_back({r.soc_major_group, fmt_shortest(r.r_o)});
    write_dsv(out, {"soc_major_group", "r_o"}, rows);
}

void write_normalized_tier_shares(std::ostream& out, const TierShareTable& table) {
    auto rows_sorted = table.rows;
    std::sort(rows_sorted.begin(), rows_sorted.end(),
              [](const TierShareRow& a, const TierShareRow& b) {
                  return a.soc_major_group < b.soc_major_group;
              });
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rows_sorted)
        rows.push_back({r.soc_major_group, fmt_shortest(r.pi[0]), fmt_shortest(r.pi[1]),
                        fmt_shortest(r.pi[2])});
    write_dsv(out, {"soc_major_group", "pi_tier1", "pi_tier2", "pi_tier3"}, rows);
}

void write_normalized_titles(std::ostream& out, const std::map<std::string, std::string>& titles) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [soc, title] : titles) rows.push_back({soc, title});
    write_dsv(out, {"soc_code", "title"}, rows);
}

void write_reject_report(std::ostream& out, std::span<const Reject> rejects) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rejects)
        rows.push_back({r.source, std::to_string(r.line), r.reason});
    write_dsv(out, {"source", "line", "reason"}, rows);
}

} // namespace ate
