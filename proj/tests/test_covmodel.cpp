#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "ate/covmodel.hpp"
#include "ate/error.hpp"
#include "ate/fixture.hpp"
#include "ate/text.hpp"

using namespace ate;

namespace {

const CovRubric& keyword_rubric() {
    static CovRubric r = CovRubric::load_json_file(std::string(ATE_TEST_DATA_DIR) + "/cov_rubric.json");
    return r;
}

const CovRubric& semantic_rubric() {
    static CovRubric r =
        CovRubric::load_json_file(std::string(ATE_TEST_DATA_DIR) + "/cov_rubric_semantic.json");
    return r;
}

// Independent matcher for the oracle scans: enumerate word-start positions in
// the lowercased text and test the phrase as a prefix there (multi-word
// phrases additionally match at any position).
bool oracle_match(const std::string& text, const std::string& phrase) {
    std::string lowered = to_lower(text);
    if (phrase.find(' ') != std::string::npos)
        return lowered.find(phrase) != std::string::npos;
    for (std::size_t i = 0; i < lowered.size(); ++i) {
        bool word_start =
            i == 0 || !std::isalnum(static_cast<unsigned char>(lowered[i - 1]));
        if (word_start && lowered.compare(i, phrase.size(), phrase) == 0) return true;
    }
    return false;
}

bool oracle_flagged(const std::string& text, const CovRubric& rubric) {
    for (const auto& cat : rubric.categories)
        for (const auto& kw : cat.keywords)
            if (oracle_match(text, kw)) return true;
    return false;
}

} // namespace

TEST_CASE("shipped rubric: four categories with the exact default multipliers") {
    const CovRubric& r = keyword_rubric();
    REQUIRE(r.categories.size() == 4);
    CHECK(r.categories[0].label == "P1");
    CHECK(r.categories[0].multiplier == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(r.categories[1].multiplier == doctest::Approx(0.70).epsilon(1e-15));
    CHECK(r.categories[2].multiplier == doctest::Approx(0.60).epsilon(1e-15));
    CHECK(r.categories[3].multiplier == doctest::Approx(0.80).epsilon(1e-15));

    auto has_kw = [&](int cat, const char* kw) {
        const auto& kws = r.categories[static_cast<std::size_t>(cat)].keywords;
        return std::find(kws.begin(), kws.end(), kw) != kws.end();
    };
    CHECK(has_kw(0, "negotiate"));
    CHECK(has_kw(0, "de-escalate"));
    CHECK(has_kw(0, "patient interaction"));
    CHECK(has_kw(1, "diagnos")); // stored prefix token
    CHECK(has_kw(1, "regulatory compliance"));
    CHECK(has_kw(2, "operate machinery"));
    CHECK(has_kw(3, "judgment call"));
}

TEST_CASE("worked example: negotiation task scores 0.75 via P1") {
    CovResult res =
        score_cov("Negotiate prices or terms of sales or service agreements", keyword_rubric());
    CHECK(res.cov == doctest::Approx(0.75).epsilon(1e-15));
    REQUIRE(res.triggered.size() == 1);
    CHECK(res.triggered[0] == "P1");
    REQUIRE(res.matched_phrases.size() == 1);
    CHECK(res.matched_phrases[0].second == "negotiate");
}

TEST_CASE("worked example: clean task scores exactly 1.0") {
    CovResult res = score_cov("Maintain customer records using automated systems", keyword_rubric());
    CHECK(res.cov == 1.0);
    CHECK(res.triggered.empty());
}

TEST_CASE("worked examples: DRG assignment and code clarification trigger P2 only") {
    CovResult a = score_cov(
        "Assign the patient to diagnosis-related groups (DRGs), using appropriate computer software",
        keyword_rubric());
    CHECK(a.cov == doctest::Approx(0.70).epsilon(1e-15));
    REQUIRE(a.triggered == std::vector<std::string>{"P2"});

    CovResult b = score_cov(
        "Resolve or clarify codes or diagnoses with conflicting, missing, or unclear information",
        keyword_rubric());
    CHECK(b.cov == doctest::Approx(0.70).epsilon(1e-15));
    CHECK(b.triggered == std::vector<std::string>{"P2"});
}

TEST_CASE("multiplicative composition across distinct categories") {
    CovResult res = score_cov("Diagnose equipment faults and lift spare parts", keyword_rubric());
    CHECK(res.cov == doctest::Approx(0.70 * 0.60).epsilon(1e-12));
    CHECK(res.triggered == std::vector<std::string>{"P2", "P3"});
}

TEST_CASE("a category counts once no matter how many phrases hit") {
    CovResult res = score_cov("Negotiate terms and counsel clients", keyword_rubric());
    CHECK(res.cov == doctest::Approx(0.75).epsilon(1e-15)); // not 0.75^2
    CHECK(res.triggered == std::vector<std::string>{"P1"});
    CHECK(res.matched_phrases.size() == 2);

    CovResult both = score_cov("Exercise a judgment call in each novel situation", keyword_rubric());
    CHECK(both.cov == doctest::Approx(0.80).epsilon(1e-15));
}

TEST_CASE("matching semantics: word-start anchored prefix for single tokens") {
    // "diagnos" hits inflected forms
    CHECK(phrase_in_text("diagnoses", "diagnos"));
    CHECK(phrase_in_text("a diagnosis-related group", "diagnos"));
    // but a mid-word occurrence does not fire
    CHECK_FALSE(phrase_in_text("respond immediately", "mediate"));
    CHECK_FALSE(phrase_in_text("shoplifting incidents", "lift"));
    CHECK(phrase_in_text("lifting heavy boxes", "lift"));
    // multi-word phrases are plain substrings
    CHECK(phrase_in_text("log patient interaction notes", "patient interaction"));
    CHECK_FALSE(phrase_in_text("patient advocacy interaction", "patient interaction"));
    // hyphen is a word boundary
    CHECK(phrase_in_text("work on-site daily", "on-site"));
    CHECK(phrase_in_text("de-escalate the dispute", "de-escalate"));
}

TEST_CASE("matching is case-insensitive") {
    CHECK(score_cov("NEGOTIATE THE CONTRACT", keyword_rubric()).cov ==
          doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("score_cov rejects empty text") {
    CHECK_THROWS_AS(score_cov("   ", keyword_rubric()), Error);
}

TEST_CASE("occupation mean cov reproduces the published means") {
    std::vector<TaskRecord> sales;
    sales.push_back({"41-3091", "t0", "Negotiate prices or terms of sales or service agreements",
                     4.0, 90.0});
    for (int i = 1; i < 15; ++i)
        sales.push_back({"41-3091", "t" + std::to_string(i),
                         "Maintain customer records using automated systems", 3.0, 80.0});
    // 14.75 / 15: rounds to the published 0.98
    CHECK(occupation_mean_cov(sales, keyword_rubric()) ==
          doctest::Approx(14.75 / 15.0).epsilon(1e-12));

    std::vector<TaskRecord> hit;
    hit.push_back({"29-9021", "t0",
                   "Assign the patient to diagnosis-related groups (DRGs), using appropriate "
                   "computer software",
                   4.0, 90.0});
    hit.push_back({"29-9021", "t1",
                   "Resolve or clarify codes or diagnoses with conflicting, missing, or unclear "
                   "information",
                   4.0, 90.0});
    for (int i = 2; i < 16; ++i)
        hit.push_back({"29-9021", "t" + std::to_string(i),
                       "Maintain customer records using automated systems", 3.0, 80.0});
    // 15.4 / 16 = 0.9625: rounds to the published 0.96
    CHECK(occupation_mean_cov(hit, keyword_rubric()) == doctest::Approx(0.9625).epsilon(1e-12));

    std::vector<TaskRecord> clean(hit.begin() + 2, hit.end());
    CHECK(occupation_mean_cov(clean, keyword_rubric()) == 1.0);
}

TEST_CASE("occupation mean cov error paths") {
    CHECK_THROWS_AS(occupation_mean_cov({}, keyword_rubric()), Error);
    std::vector<TaskRecord> mixed = {{"41-3091", "t0", "Task a", 3.0, 50.0},
                                     {"43-9111", "t1", "Task b", 3.0, 50.0}};
    CHECK_THROWS_AS(occupation_mean_cov(mixed, keyword_rubric()), Error);
}

TEST_CASE("cov values live on the 16-point multiplier lattice") {
    // Products of all 16 subsets of the four multipliers (some coincide:
    // 0.75 * 0.80 equals the bare P3 multiplier).
    std::set<long long> lattice;
    const auto& cats = keyword_rubric().categories;
    for (int mask = 0; mask < 16; ++mask) {
        double product = 1.0;
        for (int i = 0; i < 4; ++i)
            if (mask & (1 << i)) product *= cats[static_cast<std::size_t>(i)].multiplier;
        lattice.insert(std::llround(product * 1e12));
    }
    CHECK(lattice.count(std::llround(0.252 * 1e12)) == 1); // minimum attainable

    FixtureSpec spec;
    spec.seed = 5;
    spec.n_occupations = 18;
    spec.tasks_per_occ = 9;
    Dataset data = generate_fixture_corpus(spec);
    for (const auto& task : data.tasks) {
        double cov = score_cov(task.text, keyword_rubric(), task.task_id).cov;
        CHECK(lattice.count(std::llround(cov * 1e12)) == 1);
    }
}

TEST_CASE("adding a keyword never increases any cov") {
    FixtureSpec spec;
    spec.seed = 11;
    spec.n_occupations = 12;
    spec.tasks_per_occ = 8;
    Dataset data = generate_fixture_corpus(spec);

    CovRubric extended = keyword_rubric();
    extended.categories[0].keywords.push_back("records"); // matches many fixture texts
    for (const auto& task : data.tasks) {
        double before = score_cov(task.text, keyword_rubric(), task.task_id).cov;
        double after = score_cov(task.text, extended, task.task_id).cov;
        CHECK(after <= before + 1e-15);
    }
}

TEST_CASE("semantic rubric phrase sets are supersets of the keyword rubric") {
    const auto& kw = keyword_rubric().categories;
    const auto& sem = semantic_rubric().categories;
    REQUIRE(sem.size() == kw.size());
    for (std::size_t i = 0; i < kw.size(); ++i) {
        CHECK(sem[i].multiplier == kw[i].multiplier);
        for (const auto& phrase : kw[i].keywords) {
            CHECK(std::find(sem[i].keywords.begin(), sem[i].keywords.end(), phrase) !=
                  sem[i].keywords.end());
        }
    }
    auto p1 = sem[0].keywords;
    CHECK(std::find(p1.begin(), p1.end(), "consult") != p1.end());
    CHECK(std::find(p1.begin(), p1.end(), "advise") != p1.end());
    auto p2 = sem[1].keywords;
    CHECK(std::find(p2.begin(), p2.end(), "sentence") != p2.end());
    CHECK(std::find(p2.begin(), p2.end(), "verify compliance") != p2.end());
}

TEST_CASE("pilot: self-comparison flags nothing new") {
    FixtureSpec spec;
    spec.seed = 2;
    spec.n_occupations = 10;
    spec.tasks_per_occ = 6;
    Dataset data = generate_fixture_corpus(spec);
    PilotReport report = pilot_compare(data.tasks, keyword_rubric(), keyword_rubric());
    CHECK(report.newly_flagged.empty());
    CHECK(report.keyword_flagged == report.semantic_flagged);
}

TEST_CASE("pilot: counts equal a brute-force phrase scan") {
    FixtureSpec spec;
    spec.seed = 9;
    spec.n_occupations = 24;
    spec.tasks_per_occ = 10;
    Dataset data = generate_fixture_corpus(spec);
    PilotReport report = pilot_compare(data.tasks, keyword_rubric(), semantic_rubric());

    std::size_t kw_oracle = 0, sem_oracle = 0, new_oracle = 0;
    for (const auto& task : data.tasks) {
        bool kw = oracle_flagged(task.text, keyword_rubric());
        bool sem = oracle_flagged(task.text, semantic_rubric());
        if (kw) ++kw_oracle;
        if (sem) ++sem_oracle;
        if (sem && !kw) ++new_oracle;
    }
    CHECK(report.keyword_flagged == kw_oracle);
    CHECK(report.semantic_flagged == sem_oracle);
    CHECK(report.newly_flagged.size() == new_oracle);
    CHECK(report.corpus_size == data.tasks.size());
    CHECK(report.keyword_share ==
          doctest::Approx(double(kw_oracle) / double(data.tasks.size())).epsilon(1e-15));
    // superset rubric can only flag more
    CHECK(report.semantic_flagged >= report.keyword_flagged);
}

TEST_CASE("penalty scaling moves multipliers halfway to 1.0 at factor 0.5") {
    CovRubric halved = keyword_rubric().with_scaled_penalties(0.5);
    CHECK(halved.categories[0].multiplier == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(halved.categories[1].multiplier == doctest::Approx(0.85).epsilon(1e-15));
    CHECK(halved.categories[2].multiplier == doctest::Approx(0.80).epsilon(1e-15));
    CHECK(halved.categories[3].multiplier == doctest::Approx(0.90).epsilon(1e-15));
    CHECK_THROWS_AS(keyword_rubric().with_scaled_penalties(0.0), Error);
}

TEST_CASE("rubric validation rejects malformed structures") {
    CovRubric r = keyword_rubric();
    r.categories.pop_back();
    CHECK_THROWS_AS(r.validate(), Error); // four categories required

    CovRubric bad_mult = keyword_rubric();
    bad_mult.categories[0].multiplier = 1.0;
    CHECK_THROWS_AS(bad_mult.validate(), Error);

    CovRubric empty_kw = keyword_rubric();
    empty_kw.categories[2].keywords.clear();
    CHECK_THROWS_AS(empty_kw.validate(), Error);

    CovRubric upper = keyword_rubric();
    upper.categories[0].keywords.push_back("Negotiate");
    CHECK_THROWS_AS(upper.validate(), Error);
}
