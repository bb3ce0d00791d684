#include <doctest.h>

#include <cstdint>
#include <sstream>

#include "ate/capmodel.hpp"
#include "ate/error.hpp"

using namespace ate;

namespace {

AbilityMap two_ability_map() {
    AbilityMap map;
    map.add({"A", AbilityCategory::Cognitive, 1.0, ""});
    map.add({"B", AbilityCategory::Cognitive, 0.0, ""});
    map.add({"C", AbilityCategory::Cognitive, 0.6, ""});
    return map;
}

const AbilityMap& shipped_map() {
    static AbilityMap map = AbilityMap::load_file(std::string(ATE_TEST_DATA_DIR) + "/ability_map.tsv");
    return map;
}

// Tiny deterministic generator for the property checks.
struct Rng {
    std::uint64_t s;
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

} // namespace

TEST_CASE("shipped ability map carries the eleven published rows") {
    const AbilityMap& map = shipped_map();
    REQUIRE(map.size() == 11);
    CHECK(map.find("Written Comprehension")->ai_score == doctest::Approx(0.95));
    CHECK(map.find("Written Comprehension")->category == AbilityCategory::Cognitive);
    CHECK(map.find("Written Expression")->ai_score == doctest::Approx(0.93));
    CHECK(map.find("Deductive Reasoning")->ai_score == doctest::Approx(0.88));
    CHECK(map.find("Information Ordering")->ai_score == doctest::Approx(0.85));
    CHECK(map.find("Mathematical Reasoning")->ai_score == doctest::Approx(0.75));
    CHECK(map.find("Memorization")->ai_score == doctest::Approx(0.60));
    CHECK(map.find("Speed of Closure")->ai_score == doctest::Approx(0.55));
    CHECK(map.find("Speech Recognition")->ai_score == doctest::Approx(0.45));
    CHECK(map.find("Speech Recognition")->category == AbilityCategory::Sensory);
    CHECK(map.find("Near Vision")->ai_score == doctest::Approx(0.30));
    CHECK(map.find("Manual Dexterity")->ai_score == doctest::Approx(0.10));
    CHECK(map.find("Manual Dexterity")->category == AbilityCategory::Psychomotor);
    CHECK(map.find("Static Strength")->ai_score == 0.0);
    CHECK(map.find("Static Strength")->category == AbilityCategory::Physical);
}

TEST_CASE("base_cap: importance-weighted mean") {
    AbilityProfile p;
    p.soc_code = "13-0000";
    p.entries = {{"Written Comprehension", 3.0}};
    CHECK(base_cap(p, shipped_map()) == doctest::Approx(0.95).epsilon(1e-12));

    AbilityProfile q;
    q.soc_code = "13-0001";
    q.entries = {{"A", 2.0}, {"B", 2.0}};
    CHECK(base_cap(q, two_ability_map()) == doctest::Approx(0.5).epsilon(1e-12));

    AbilityProfile r;
    r.soc_code = "53-0001";
    r.entries = {{"Static Strength", 5.0}};
    CHECK(base_cap(r, shipped_map()) == 0.0);
}

TEST_CASE("base_cap: unmapped ability errors name the ability") {
    AbilityProfile p;
    p.soc_code = "13-0000";
    p.entries = {{"Underwater Basket Weaving", 3.0}};
    CHECK_THROWS_WITH_AS(base_cap(p, shipped_map()), doctest::Contains("Underwater Basket Weaving"),
                         Error);
}

TEST_CASE("base_cap: empty profile is an error") {
    AbilityProfile p;
    p.soc_code = "13-0000";
    CHECK_THROWS_AS(base_cap(p, shipped_map()), Error);
}

TEST_CASE("base_cap: drop-and-renormalize policy skips unmapped abilities") {
    AbilityProfile p;
    p.soc_code = "13-0000";
    p.entries = {{"Written Comprehension", 3.0}, {"Unknown Ability", 2.0}};
    CHECK_THROWS_AS(base_cap(p, shipped_map(), UnmappedAbilityPolicy::Error), Error);
    CHECK(base_cap(p, shipped_map(), UnmappedAbilityPolicy::DropAndRenormalize) ==
          doctest::Approx(0.95).epsilon(1e-12));

    AbilityProfile all_unknown;
    all_unknown.soc_code = "13-0001";
    all_unknown.entries = {{"Unknown Ability", 2.0}};
    CHECK_THROWS_AS(base_cap(all_unknown, shipped_map(), UnmappedAbilityPolicy::DropAndRenormalize),
                    Error);
}

TEST_CASE("cap_for_task: multiplicative text modifier with clamping") {
    AbilityProfile p;
    p.soc_code = "43-0000";
    p.entries = {{"C", 1.0}}; // base 0.6
    std::vector<TextModifierRule> rules = {{"data entry", true, 1.15}};

    TaskRecord boosted{"43-0000", "t1", "Perform data entry of invoices", 4.0, 90.0};
    CHECK(cap_for_task(boosted, p, two_ability_map(), rules) ==
          doctest::Approx(0.69).epsilon(1e-12)); // hand-multiplied 0.6 * 1.15

    TaskRecord plain{"43-0000", "t2", "Answer routine questions", 4.0, 90.0};
    CHECK(cap_for_task(plain, p, two_ability_map(), rules) == doctest::Approx(0.6).epsilon(1e-12));

    AbilityProfile high;
    high.soc_code = "43-0001";
    high.entries = {{"Written Comprehension", 2.0}}; // base 0.95
    CHECK(cap_for_task(boosted, high, shipped_map(), rules) == 1.0); // clamped
}

TEST_CASE("cap_for_task: empty rule list degenerates to base_cap") {
    AbilityProfile p;
    p.soc_code = "43-0000";
    p.entries = {{"Written Comprehension", 2.5}, {"Memorization", 1.0}};
    TaskRecord task{"43-0000", "t1", "Perform data entry of invoices", 4.0, 90.0};
    CHECK(cap_for_task(task, p, shipped_map(), {}) ==
          doctest::Approx(base_cap(p, shipped_map())).epsilon(1e-15));
}

TEST_CASE("cap invariants: scaling, permutation, range") {
    Rng rng{12345};
    const auto& rows = shipped_map().rows();
    std::vector<TextModifierRule> rules = {{"data entry", true, 1.15},
                                           {"lift", false, 0.7},
                                           {"compile", true, 1.10}};
    for (int iter = 0; iter < 200; ++iter) {
        AbilityProfile p;
        p.soc_code = "13-0000";
        std::size_t n = 1 + rng.next() % 6;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& row = rows[rng.next() % rows.size()];
            bool dup = false;
            for (const auto& [name, imp] : p.entries)
                if (name == row.ability_name) dup = true;
            if (dup) continue;
            p.entries.emplace_back(row.ability_name, 1.0 + 4.0 * rng.unit());
        }
        if (p.entries.empty()) continue;

        double base = base_cap(p, shipped_map());
        CHECK(base >= 0.0);
        CHECK(base <= 1.0);

        // Uniform scaling of importances leaves the weighted mean unchanged.
        AbilityProfile scaled = p;
        for (auto& [name, imp] : scaled.entries) imp *= 7.5;
        CHECK(base_cap(scaled, shipped_map()) == doctest::Approx(base).epsilon(1e-12));

        // Permuting entries never changes the result.
        AbilityProfile reversed = p;
        std::reverse(reversed.entries.begin(), reversed.entries.end());
        CHECK(base_cap(reversed, shipped_map()) == doctest::Approx(base).epsilon(1e-12));

        TaskRecord task{"13-0000", "t", "compile reports then lift boxes with data entry", 3.0, 50.0};
        double cap = cap_for_task(task, p, shipped_map(), rules);
        CHECK(cap >= 0.0);
        CHECK(cap <= 1.0);
    }
}

TEST_CASE("modifier rule validation") {
    CHECK_THROWS_AS(TextModifierRule({"x", true, 0.9}).validate(), Error);  // boost must be > 1
    CHECK_THROWS_AS(TextModifierRule({"x", false, 1.1}).validate(), Error); // reduce must be < 1
    CHECK_THROWS_AS(TextModifierRule({"x", true, 2.5}).validate(), Error);  // magnitude cap
    CHECK_THROWS_AS(TextModifierRule({"X", true, 1.1}).validate(), Error);  // lowercase only
    CHECK_THROWS_AS(TextModifierRule({"", true, 1.1}).validate(), Error);
    CHECK_NOTHROW(TextModifierRule({"data entry", true, 1.15}).validate());
}

TEST_CASE("shipped modifier rules load with the calibrated magnitudes") {
    auto rules = load_modifier_rules_file(std::string(ATE_TEST_DATA_DIR) + "/modifier_rules.tsv");
    REQUIRE(rules.size() == 8);
    int boosts = 0, reduces = 0;
    for (const auto& r : rules) {
        if (r.boost) ++boosts;
        else ++reduces;
    }
    CHECK(boosts == 4);
    CHECK(reduces == 4);
    CHECK(rules[0].pattern == "data entry");
    CHECK(rules[0].magnitude == doctest::Approx(1.15));
    CHECK(rules[4].pattern == "lift");
    CHECK(rules[4].magnitude == doctest::Approx(0.70));
}

TEST_CASE("ability map rejects duplicates and bad scores") {
    AbilityMap map;
    map.add({"A", AbilityCategory::Cognitive, 0.5, ""});
    CHECK_THROWS_AS(map.add({"A", AbilityCategory::Cognitive, 0.6, ""}), Error);
    CHECK_THROWS_AS(map.add({"B", AbilityCategory::Cognitive, 1.5, ""}), Error);
    CHECK_THROWS_AS(parse_ability_category("Spiritual"), Error);
}

TEST_CASE("uniform ability scaling clamps at 1") {
    AbilityMap scaled = shipped_map().scaled(1.1);
    CHECK(scaled.find("Written Comprehension")->ai_score == 1.0); // 0.95*1.1 clamped
    CHECK(scaled.find("Memorization")->ai_score == doctest::Approx(0.66));
    CHECK_THROWS_AS(shipped_map().scaled(0.0), Error);
}
