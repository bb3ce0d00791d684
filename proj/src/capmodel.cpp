#include "ate/capmodel.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "ate/dsv.hpp"
#include "ate/error.hpp"
#include "ate/text.hpp"

namespace ate {

AbilityCategory parse_ability_category(std::string_view s) {
    if (s == "Cognitive") return AbilityCategory::Cognitive;
    if (s == "Sensory") return AbilityCategory::Sensory;
    if (s == "Psychomotor") return AbilityCategory::Psychomotor;
    if (s == "Physical") return AbilityCategory::Physical;
    throw Error("capmodel: unknown ability category '" + std::string(s) + "'");
}

std::string_view ability_category_name(AbilityCategory c) {
    switch (c) {
    case AbilityCategory::Cognitive: return "Cognitive";
    case AbilityCategory::Sensory: return "Sensory";
    case AbilityCategory::Psychomotor: return "Psychomotor";
    case AbilityCategory::Physical: return "Physical";
    }
    throw Error("capmodel: invalid ability category value");
}

void AbilityMap::add(AbilityMapRow row) {
    if (row.ability_name.empty()) throw Error("capmodel: empty ability name");
    if (row.ai_score < 0.0 || row.ai_score > 1.0)
        throw Error("capmodel: ai_score " + fmt_shortest(row.ai_score) + " outside [0,1] for '" +
                    row.ability_name + "'");
    if (index_.count(row.ability_name))
        throw Error("capmodel: duplicate ability '" + row.ability_name + "'");
    index_.emplace(row.ability_name, rows_.size());
    rows_.push_back(std::move(row));
}

const AbilityMapRow* AbilityMap::find(std::string_view ability_name) const {
    auto it = index_.find(std::string(ability_name));
    return it == index_.end() ? nullptr : &rows_[it->second];
}

AbilityMap AbilityMap::load(std::istream& in, const std::string& source_name) {
    DsvTable table = read_dsv(in, source_name);
    int c_name = table.column_index("ability_name");
    int c_cat = table.column_index("category");
    int c_score = table.column_index("ai_score");
    int c_note = table.column_index("source_note");
    if (c_name < 0 || c_cat < 0 || c_score < 0)
        throw Error("capmodel: " + source_name +
                    ": ability map needs columns ability_name, category, ai_score");
    AbilityMap map;
    for (const auto& row : table.rows) {
        if (row.fields.size() < 3)
            throw Error("capmodel: " + source_name + ": short row at line " + std::to_string(row.line));
        AbilityMapRow r;
        r.ability_name = std::string(trim(row.fields[static_cast<std::size_t>(c_name)]));
        r.category = parse_ability_category(trim(row.fields[static_cast<std::size_t>(c_cat)]));
        auto score = parse_double(row.fields[static_cast<std::size_t>(c_score)]);
        if (!score)
            throw Error("capmodel: " + source_name + ": unparseable ai_score at line " +
                        std::to_string(row.line));
        r.ai_score = *score;
        if (c_note >= 0 && static_cast<std::size_t>(c_note) < row.fields.size())
            r.source_note = row.fields[static_cast<std::size_t>(c_note)];
        map.add(std::move(r));
    }
    return map;
}

AbilityMap AbilityMap::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("capmodel: cannot open ability map: " + path);
    return load(in, path);
}

AbilityMap AbilityMap::scaled(double factor) const {
    if (factor <= 0.0) throw Error("capmodel: ability scale factor must be positive");
    AbilityMap out;
    for (AbilityMapRow row : rows_) {
        row.ai_score = std::min(1.0, row.ai_score * factor);
        out.add(std::move(row));
    }
    return out;
}

void TextModifierRule::validate() const {
    if (pattern.empty()) throw Error("capmodel: empty modifier pattern");
    if (pattern != to_lower(pattern))
        throw Error("capmodel: modifier pattern must be lowercase: '" + pattern + "'");
    if (magnitude <= 0.0 || magnitude > 2.0)
        throw Error("capmodel: modifier magnitude " + fmt_shortest(magnitude) + " outside (0,2]");
    if (boost && magnitude <= 1.0)
        throw Error("capmodel: boost magnitude must exceed 1: '" + pattern + "'");
    if (!boost && magnitude >= 1.0)
        throw Error("capmodel: reduce magnitude must be below 1: '" + pattern + "'");
}

std::vector<TextModifierRule> load_modifier_rules(std::istream& in,
                                                  const std::string& source_name) {
    DsvTable table = read_dsv(in, source_name);
    int c_pat = table.column_index("pattern");
    int c_dir = table.column_index("direction");
    int c_mag = table.column_index("magnitude");
    if (c_pat < 0 || c_dir < 0 || c_mag < 0)
        throw Error("capmodel: " + source_name +
                    ": modifier rules need columns pattern, direction, magnitude");
    std::vector<TextModifierRule> rules;
    for (const auto& row : table.rows) {
        if (row.fields.size() < 3)
            throw Error("capmodel: " + source_name + ": short row at line " + std::to_string(row.line));
        TextModifierRule rule;
        rule.pattern = std::string(trim(row.fields[static_cast<std::size_t>(c_pat)]));
        std::string dir(trim(row.fields[static_cast<std::size_t>(c_dir)]));
        if (dir == "boost") rule.boost = true;
        else if (dir == "reduce") rule.boost = false;
        else throw Error("capmodel: " + source_name + ": direction must be boost|reduce, got '" + dir + "'");
        auto mag = parse_double(row.fields[static_cast<std::size_t>(c_mag)]);
        if (!mag)
            throw Error("capmodel: " + source_name + ": unparseable magnitude at line " +
                        std::to_string(row.line));
        rule.magnitude = *mag;
        rule.validate();
        rules.push_back(std::move(rule));
    }
    return rules;
}

std::vector<TextModifierRule> load_modifier_rules_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("capmodel: cannot open modifier rules: " + path);
    return load_modifier_rules(in, path);
}

double base_cap(const AbilityProfile& profile, const AbilityMap& map,
                UnmappedAbilityPolicy policy) {
    if (profile.entries.empty())
        throw Error("capmodel: empty ability profile for " + profile.soc_code);
    double weighted = 0.0, total = 0.0;
    for (const auto& [name, importance] : profile.entries) {
        const AbilityMapRow* row = map.find(name);
        if (!row) {
            if (policy == UnmappedAbilityPolicy::DropAndRenormalize) continue;
            throw Error("capmodel: ability '" + name + "' (profile " + profile.soc_code +
                        ") is not in the ability map");
        }
        weighted += importance * row->ai_score;
        total += importance;
    }
    if (total <= 0.0)
        throw Error("capmodel: no mapped abilities remain for " + profile.soc_code);
    return weighted / total;
}

double cap_for_task(const TaskRecord& task, const AbilityProfile& profile, const AbilityMap& map,
                    const std::vector<TextModifierRule>& rules, UnmappedAbilityPolicy policy) {
    double cap = base_cap(profile, map, policy);
    std::string lowered = to_lower(task.text);
    for (const auto& rule : rules) {
        if (lowered.find(rule.pattern) != std::string::npos) cap *= rule.magnitude;
    }
    return std::clamp(cap, 0.0, 1.0);
}

} // namespace ate
