#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ate/types.hpp"

namespace ate {

enum class AbilityCategory { Cognitive, Sensory, Psychomotor, Physical };

AbilityCategory parse_ability_category(std::string_view s);
std::string_view ability_category_name(AbilityCategory c);

struct AbilityMapRow {
    std::string ability_name;
    AbilityCategory category = AbilityCategory::Cognitive;
    double ai_score = 0; // [0,1]
    std::string source_note;
};

class AbilityMap {
public:
    void add(AbilityMapRow row); // validates score range and name uniqueness
    const AbilityMapRow* find(std::string_view ability_name) const;
    const std::vector<AbilityMapRow>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    // Loads from the normalized DSV layout (ability_name, category, ai_score, source_note).
    static AbilityMap load(std::istream& in, const std::string& source_name = "<stream>");
    static AbilityMap load_file(const std::string& path);

    // Uniform relative scaling of all ai_scores, clamped to [0,1]. Used by the
    // cap_uniform sensitivity sweep.
    AbilityMap scaled(double factor) const;

private:
    std::vector<AbilityMapRow> rows_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct TextModifierRule {
    std::string pattern; // lowercase substring
    bool boost = true;   // boost magnitude > 1, reduce magnitude < 1
    double magnitude = 1.0; // (0, 2]

    void validate() const; // throws ate::Error on invariant violations
};

std::vector<TextModifierRule> load_modifier_rules(std::istream& in,
                                                  const std::string& source_name = "<stream>");
std::vector<TextModifierRule> load_modifier_rules_file(const std::string& path);

// Abilities present in a profile but absent from a partial map: hard error by
// default; DropAndRenormalize skips them (needed when running with only the 11
// published ability rows).
enum class UnmappedAbilityPolicy { Error, DropAndRenormalize };

// Importance-weighted mean of per-ability AI scores: sum(imp_i * score_i) / sum(imp_i).
double base_cap(const AbilityProfile& profile, const AbilityMap& map,
                UnmappedAbilityPolicy policy = UnmappedAbilityPolicy::Error);

// base_cap times the product of magnitudes of every rule whose pattern occurs
// in the lowercased task text, clamped to [0,1].
double cap_for_task(const TaskRecord& task, const AbilityProfile& profile, const AbilityMap& map,
                    const std::vector<TextModifierRule>& rules,
                    UnmappedAbilityPolicy policy = UnmappedAbilityPolicy::Error);

} // namespace ate
