#include <doctest.h>

#include <sstream>

#include "ate/dsv.hpp"
#include "ate/error.hpp"
#include "ate/fixture.hpp"
#include "ate/report.hpp"
#include "ate/version.hpp"

using namespace ate;

namespace {

Provenance test_provenance() {
    Provenance p;
    p.engine_version = kEngineVersion;
    p.ledger_version = "2025.1";
    p.inputs = {{"tasks", "00aa11bb22cc33dd"}};
    p.params = {{"region", "sf_bay"}};
    return p;
}

TableArtifact small_artifact() {
    TableArtifact t;
    t.id = TableId::TierParams;
    t.columns = {"tier", "k"};
    t.rows = {{"1", "0.85"}, {"2", "0.62"}};
    t.provenance = test_provenance();
    return t;
}

} // namespace

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("render is byte-identical across calls") {
    TableArtifact t = small_artifact();
    CHECK(render(t, RenderFormat::Delimited) == render(t, RenderFormat::Delimited));
    CHECK(render(t, RenderFormat::AlignedText) == render(t, RenderFormat::AlignedText));
}

TEST_CASE("render rejects unknown table ids and ragged rows") {
    TableArtifact t = small_artifact();
    t.id = static_cast<TableId>(99);
    CHECK_THROWS_WITH_AS(render(t, RenderFormat::Delimited), doctest::Contains("unknown table id"),
                         Error);
    CHECK_THROWS_AS(parse_table_id("not_a_table"), Error);

    TableArtifact ragged = small_artifact();
    ragged.rows.push_back({"3"});
    CHECK_THROWS_AS(render(ragged, RenderFormat::Delimited), Error);
}

TEST_CASE("table id names round-trip") {
    for (const char* name : {"tier_params", "top_n", "regional_shares", "telework", "tier_shares",
                             "remote_deltas", "k_stress", "histogram", "pilot", "reinstatement",
                             "oat_sensitivity", "validation"}) {
        CHECK(table_id_name(parse_table_id(name)) == name);
    }
}

TEST_CASE("empty artifact renders provenance and header only") {
    TableArtifact t = small_artifact();
    t.rows.clear();
    std::string out = render(t, RenderFormat::Delimited);
    std::istringstream lines(out);
    std::vector<std::string> all;
    std::string line;
    while (std::getline(lines, line)) all.push_back(line);
    REQUIRE(all.size() == 6); // 5 provenance lines + header
    CHECK(all[0] == "# table: tier_params");
    CHECK(all[1] == std::string("# engine: ") + kEngineVersion);
    CHECK(all[2] == "# ledger: 2025.1");
    CHECK(all[3] == "# input: tasks=00aa11bb22cc33dd");
    CHECK(all[4] == "# param: region=sf_bay");
    CHECK(all[5] == "tier\tk");
}

TEST_CASE("delimited output re-parses to the same cells through the comment block") {
    TableArtifact t = small_artifact();
    t.columns = {"soc_code", "text", "value"};
    t.rows = {{"13-2041", "contains\ttab and \"quotes\", commas", "0.43"},
              {"23-1023", "plain", "0.43"}};
    std::string rendered = render(t, RenderFormat::Delimited);
    std::istringstream in(rendered);
    DsvTable parsed = read_dsv(in);
    REQUIRE(parsed.columns == t.columns);
    REQUIRE(parsed.rows.size() == 2);
    CHECK(parsed.rows[0].fields[1] == "contains\ttab and \"quotes\", commas");
    CHECK(parsed.rows[1].fields[2] == "0.43");
}

TEST_CASE("top-n table ranks by base score with soc tie break and flags duplicates") {
    std::vector<OccupationScore> occs;
    auto add = [&](const char* soc, const char* title, double base) {
        OccupationScore o;
        o.soc_code = soc;
        o.title = title;
        o.base_score = base;
        occs.push_back(std::move(o));
    };
    add("13-1199.05", "Sustainability Specialists", 0.512);
    add("13-1199.04", "Business Continuity Planners", 0.512); // tie: sorts first by soc
    add("23-1023", "Judges", 0.511);
    add("43-9111", "Statistical Assistants", 0.300);

    ScoreModel model;
    model.tiers = TierSet{{TierParams{0.85, 2024.25, 0.92}, TierParams{0.62, 2025.00, 0.85},
                           TierParams{0.48, 2025.75, 0.78}}};
    model.regions = {{"sf_bay", "SF Bay", 1, 2431}};

    std::map<std::string, Annotation> notes = {{"23-1023", {"*", "caveat"}}};
    std::map<std::string, std::string> labels = {{"13", "Financial"}, {"23", "Legal"},
                                                 {"43", "Admin/Clerical"}};
    std::vector<double> taus = {2025.0, 2027.0, 2030.0};
    TableArtifact t =
        make_top_n_table(occs, model, model.regions[0], taus, 3, notes, labels, test_provenance());

    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0][1] == "13-1199.04"); // tie broken by soc ascending
    CHECK(t.rows[1][1] == "13-1199.05");
    CHECK(t.rows[2][1] == "23-1023");
    CHECK(t.rows[0][3] == "Financial");
    // 0.512 * V(T1, 2027) rounds to the published 0.43
    CHECK(t.rows[0][5] == "0.43");
    CHECK(t.rows[0][4] == "0.31");
    CHECK(t.rows[0][6] == "0.47");
    // duplicate 6-digit base flagged on both rows, annotation marker carried
    CHECK(t.rows[0][7] == "dup:13-1199");
    CHECK(t.rows[1][7] == "dup:13-1199");
    CHECK(t.rows[2][7] == "*");
}

TEST_CASE("histogram and k-stress tables format at the documented precision") {
    Histogram h;
    h.bin_width = 0.05;
    h.first_bin = 7; // [0.35, 0.40)
    h.counts = {99, 68};
    TableArtifact ht = make_histogram_table(h, test_provenance());
    REQUIRE(ht.rows.size() == 2);
    CHECK(ht.rows[0] == std::vector<std::string>{"0.35", "0.40", "99"});
    CHECK(ht.rows[1] == std::vector<std::string>{"0.40", "0.45", "68"});

    std::vector<KStressCell> cells = {{1, "baseline", 2027, 236, 167, 70.76271186}};
    TableArtifact kt = make_k_stress_table(cells, test_provenance());
    CHECK(kt.rows[0][5] == "70.8"); // one decimal place at emission
}

TEST_CASE("annotations and group labels load from the shipped config") {
    auto notes = load_annotations_file(std::string(ATE_TEST_DATA_DIR) + "/annotations.tsv");
    REQUIRE(notes.count("29-1229") == 1);
    REQUIRE(notes.count("23-1023") == 1);
    CHECK(notes.at("29-1229").marker == "†");  // dagger
    CHECK(notes.at("23-1023").marker == "‡");  // double dagger
    CHECK(!notes.at("29-1229").note.empty());

    auto labels = load_group_labels_file(std::string(ATE_TEST_DATA_DIR) + "/group_labels.tsv");
    CHECK(labels.at("13") == "Financial");
    CHECK(labels.at("23") == "Legal");
    CHECK(labels.at("29") == "Healthcare");
    CHECK(labels.at("31") == "HC Support");
    CHECK(labels.at("41") == "Sales");
    CHECK(labels.at("43") == "Admin/Clerical");
}

TEST_CASE("artifact file stems encode the qualifiers") {
    CHECK(artifact_file_stem(TableId::TierParams) == "tier_params");
    CHECK(artifact_file_stem(TableId::HistogramBins, "sf_bay", 2027.0, "residence") ==
          "histogram__sf_bay__2027__residence");
    CHECK(artifact_file_stem(TableId::RemoteDeltas, {}, 2027.0) == "remote_deltas__2027");
    CHECK(artifact_file_stem(TableId::TopN, "seattle", std::nullopt, "remote-adjusted") ==
          "top_n__seattle__remote_adjusted");
}

TEST_CASE("reinstatement table rounds to the nearest thousand at emission") {
    std::vector<ReinstatementScenario> scenarios = {{"low", 580000, 0.10, 0.5, 0.8},
                                                    {"high", 580000, 0.30, 0.5, 0.8}};
    TableArtifact t = make_reinstatement_table(scenarios, test_provenance());
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] ==
          std::vector<std::string>{"low", "580000", "10", "58000", "29000", "46000"});
    CHECK(t.rows[1] ==
          std::vector<std::string>{"high", "580000", "30", "174000", "87000", "139000"});
}

TEST_CASE("aligned text pads columns deterministically") {
    TableArtifact t = small_artifact();
    std::string out = render(t, RenderFormat::AlignedText);
    CHECK(out.find("tier  k") != std::string::npos);
    CHECK(out.find("   1  0.85") != std::string::npos);
}
