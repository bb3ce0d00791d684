#include "ate/fixture.hpp"

#include <array>
#include <cstdio>
#include <random>

#include "ate/error.hpp"

namespace ate {

namespace {

// The std:: distributions are not bit-identical across standard libraries, so
// fixtures draw through these helpers only.
double next_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

int next_int(std::mt19937_64& g, int lo, int hi) { // inclusive range
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(g() % span);
}

// Round to a decimal grid through integer division so the stored double is
// the closest representation of the decimal (dumps print "87.3", not
// "87.30000000000001").
double round_decimal(double v, double units_per_one) {
    return static_cast<double>(static_cast<long long>(v * units_per_one + 0.5)) / units_per_one;
}

const std::array<const char*, 6> kMajorGroups = {"13", "23", "29", "31", "41", "43"};

const std::array<const char*, 11> kAbilityNames = {
    "Written Comprehension", "Written Expression", "Deductive Reasoning",
    "Information Ordering",  "Mathematical Reasoning", "Memorization",
    "Speed of Closure",      "Speech Recognition", "Near Vision",
    "Manual Dexterity",      "Static Strength"};

// Neutral statements: no rubric keywords, no modifier patterns. A few contain
// lookalike words (automated, immediately) that must not trigger anything.
const std::array<const char*, 8> kNeutralTexts = {
    "Maintain customer records using automated systems",
    "Review account statements immediately after closing periods",
    "Summarize quarterly figures for internal planning meetings",
    "Update internal documentation for standard procedures",
    "Organize schedules and coordinate calendar entries",
    "Classify incoming documents into the records system",
    "Monitor routine system dashboards each morning",
    "Draft routine summaries of weekly activity",
};

// One rubric keyword each, covering all four penalty categories, including
// prefix-token hits (diagnoses) and multi-word phrases.
const std::array<const char*, 12> kPenaltyTexts = {
    "Negotiate prices or terms of service agreements with vendors",
    "Counsel clients on available repayment arrangements",
    "Coordinate patient interaction logs during scheduled visits",
    "Certify the accuracy of submitted regulatory filings",
    "Resolve or clarify conflicting diagnoses in case files",
    "Review documents for regulatory compliance before release",
    "Physically inspect storage areas for damaged stock",
    "Lift and move archived record boxes between floors",
    "Perform field work at client installations each quarter",
    "Respond to emergency requests from account holders",
    "Escalate unresolved disputes to the review board",
    "Exercise a judgment call when handling novel situation reports",
};

// One modifier pattern each (boosts then reductions).
const std::array<const char*, 6> kModifierTexts = {
    "Perform data entry of invoices into the ledger system",
    "Process routine correspondence with account holders",
    "Compile monthly summaries from branch submissions",
    "Prepare reports describing quarterly account activity",
    "Physically arrange exhibit materials before hearings",
    "Meet in person with new account applicants",
};

// Task slot layout per 10 slots: 5 neutral, 3 penalty, 2 modifier. Keeps the
// keyword fraction near the 30% target and bounds boosted-task weight.
enum class SlotKind { Neutral, Penalty, Modifier };
const std::array<SlotKind, 10> kSlotPattern = {
    SlotKind::Neutral, SlotKind::Penalty, SlotKind::Neutral,  SlotKind::Modifier,
    SlotKind::Neutral, SlotKind::Penalty, SlotKind::Neutral,  SlotKind::Neutral,
    SlotKind::Penalty, SlotKind::Modifier};

} // namespace

Dataset generate_fixture_corpus(const FixtureSpec& spec) {
    if (spec.n_occupations < 1 || spec.tasks_per_occ < 1)
        throw Error("fixture: counts must be >= 1");
    if (spec.region_ids.empty()) throw Error("fixture: at least one region id required");

    std::mt19937_64 rng(spec.seed);
    Dataset out;

    for (int occ = 0; occ < spec.n_occupations; ++occ) {
        const char* group = kMajorGroups[static_cast<std::size_t>(occ) % kMajorGroups.size()];
        char code[32];
        if (occ % 7 == 3)
            std::snprintf(code, sizeof code, "%s-%04d.%02d", group, 1000 + occ * 10, occ % 9 + 1);
        else
            std::snprintf(code, sizeof code, "%s-%04d", group, 1000 + occ * 10);
        std::string soc(code);
        char title[64];
        std::snprintf(title, sizeof title, "Fixture Occupation %03d", occ);
        out.titles[soc] = title;

        // Ability profile: 3..8 distinct abilities.
        int n_abilities = next_int(rng, 3, 8);
        std::array<bool, 11> used{};
        AbilityProfile prof;
        prof.soc_code = soc;
        for (int a = 0; a < n_abilities; ++a) {
            int pick = next_int(rng, 0, 10);
            while (used[static_cast<std::size_t>(pick)]) pick = (pick + 1) % 11;
            used[static_cast<std::size_t>(pick)] = true;
            double imp = round_decimal(1.0 + 4.0 * next_unit(rng), 100.0);
            prof.entries.emplace_back(kAbilityNames[static_cast<std::size_t>(pick)], imp);
        }
        out.profiles.push_back(std::move(prof));

        for (int j = 0; j < spec.tasks_per_occ; ++j) {
            TaskRecord rec;
            rec.soc_code = soc;
            char tid[32];
            std::snprintf(tid, sizeof tid, "T%03d-%02d", occ, j);
            rec.task_id = tid;

            SlotKind kind = kSlotPattern[static_cast<std::size_t>((j + occ) % 10)];
            const char* text = nullptr;
            switch (kind) {
            case SlotKind::Neutral:
                text = kNeutralTexts[static_cast<std::size_t>(next_int(rng, 0, 7))];
                break;
            case SlotKind::Penalty:
                text = kPenaltyTexts[static_cast<std::size_t>(next_int(rng, 0, 11))];
                break;
            case SlotKind::Modifier:
                text = kModifierTexts[static_cast<std::size_t>(next_int(rng, 0, 5))];
                break;
            }
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s (case %03d-%02d)", text, occ, j);
            rec.text = buf;

            rec.importance = round_decimal(1.0 + 4.0 * next_unit(rng), 100.0);
            // One zero-relevance task per third occupation: exercises the
            // weight-0 retention path without ever zeroing a whole occupation.
            if (occ % 3 == 1 && j == 1 && spec.tasks_per_occ >= 2)
                rec.relevance = 0.0;
            else
                rec.relevance = round_decimal(5.0 + 95.0 * next_unit(rng), 10.0);
            out.tasks.push_back(std::move(rec));
        }

        for (const auto& region : spec.region_ids) {
            EmploymentRecord emp;
            emp.soc_code = soc;
            emp.region_id = region;
            emp.employment = next_int(rng, 500, 50000);
            out.employment.push_back(std::move(emp));
        }
    }

    // Parameter tables mirror the shipped group structure so fixture runs
    // work in remote-adjusted mode too.
    out.telework.rows = {{"13", 0.559}, {"23", 0.527}, {"29", 0.131},
                         {"31", 0.102}, {"41", 0.238}, {"43", 0.251}};
    out.tier_shares.rows = {{"13", {0.122, 0.271, 0.607}}, {"23", {0.146, 0.232, 0.621}},
                            {"29", {0.159, 0.267, 0.574}}, {"31", {0.159, 0.267, 0.574}},
                            {"41", {0.159, 0.333, 0.507}}, {"43", {0.102, 0.338, 0.560}}};
    for (auto& row : out.tier_shares.rows) {
        double sum = row.pi[0] + row.pi[1] + row.pi[2];
        for (double& v : row.pi) v /= sum;
    }

    out.sort_all();
    return out;
}

} // namespace ate
