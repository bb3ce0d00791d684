#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "ate/adoption.hpp"
#include "ate/error.hpp"

using namespace ate;

namespace {

// Table-calibrated tier parameters.
const TierParams kTier1{0.85, 2024.25, 0.92};
const TierParams kTier2{0.62, 2025.00, 0.85};
const TierParams kTier3{0.48, 2025.75, 0.78};
TierSet tiers() { return TierSet{{kTier1, kTier2, kTier3}}; }

// Frozen oracle values, evaluated independently at high precision.
constexpr double kV1_2027 = 0.8389806774850826;
constexpr double kV2_2027 = 0.6592294121287124;
constexpr double kV3_2027 = 0.5036119188561205;
constexpr double kV1_2025Q1 = 0.6235901064648208;
constexpr double kV3_2025Q1 = 0.3319348368869060;

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

TEST_CASE("logistic value at the inflection point is exactly L/2") {
    CHECK(logistic_v(kTier1, 2024.25) == doctest::Approx(0.46).epsilon(1e-15));
    CHECK(logistic_v(kTier2, 2025.00) == doctest::Approx(0.425).epsilon(1e-15));
}

TEST_CASE("logistic closed form matches the frozen high-precision values") {
    CHECK(logistic_v(kTier1, 2027.0) == doctest::Approx(kV1_2027).epsilon(1e-12));
    CHECK(logistic_v(kTier2, 2027.0) == doctest::Approx(kV2_2027).epsilon(1e-12));
    CHECK(logistic_v(kTier3, 2027.0) == doctest::Approx(kV3_2027).epsilon(1e-12));
}

TEST_CASE("2025 Q1 anchors land near the published levels") {
    double tau = quarter_tau(2025, 1);
    CHECK(tau == doctest::Approx(2025.125).epsilon(1e-15));
    double v1 = logistic_v(kTier1, tau);
    double v3 = logistic_v(kTier3, tau);
    CHECK(v1 == doctest::Approx(kV1_2025Q1).epsilon(1e-12));
    CHECK(v3 == doctest::Approx(kV3_2025Q1).epsilon(1e-12));
    CHECK(v1 >= 0.60);
    CHECK(v1 <= 0.64);
    CHECK(v3 >= 0.32);
    CHECK(v3 <= 0.36);
}

TEST_CASE("quarter convention and bounds") {
    CHECK(quarter_tau(2025, 4) == doctest::Approx(2025.875).epsilon(1e-15));
    CHECK(quarter_tau(2026, 2) == doctest::Approx(2026.375).epsilon(1e-15));
    CHECK_THROWS_AS(quarter_tau(2025, 0), Error);
    CHECK_THROWS_AS(quarter_tau(2025, 5), Error);
}

TEST_CASE("logistic is strictly increasing and bounded by (0, L)") {
    double prev = 0.0;
    for (double tau = 2015.0; tau <= 2045.0; tau += 0.25) {
        double v = logistic_v(kTier1, tau);
        CHECK(v > prev);
        CHECK(v > 0.0);
        CHECK(v < kTier1.L);
        prev = v;
    }
}

TEST_CASE("logistic is exactly linear in L") {
    for (double c : {0.9, 1.1, 0.5, 1.05}) {
        TierParams scaled = kTier1;
        scaled.L = kTier1.L * c;
        double ratio = logistic_v(scaled, 2027.0) / logistic_v(kTier1, 2027.0);
        CHECK(std::abs(ratio - c) <= 1e-13);
    }
}

TEST_CASE("v_eff degenerates to the residence velocity when r_o is zero") {
    std::vector<double> pi = {0.122, 0.271, 0.607};
    CHECK(v_eff(0.0, pi, tiers(), 1, 2027.0) == logistic_v(kTier1, 2027.0));
}

TEST_CASE("v_eff reproduces the financial and legal remote deltas") {
    TierSet ts = tiers();
    // Financial: r_o 0.559, published shares normalized on load
    {
        std::vector<double> pi = {0.122, 0.271, 0.607};
        double veff_sf = v_eff(0.559, pi, ts, 1, 2027.0);
        CHECK(veff_sf == doctest::Approx(0.697955).epsilon(2e-6));
        CHECK(100.0 * (veff_sf / kV1_2027 - 1.0) == doctest::Approx(-16.81).epsilon(0.002));
        double veff_ny = v_eff(0.559, pi, ts, 3, 2027.0);
        CHECK(100.0 * (veff_ny / kV3_2027 - 1.0) == doctest::Approx(9.22).epsilon(0.002));
    }
    // Legal: r_o 0.527, shares (0.146, 0.232, 0.621) sum to 0.999 -> normalize
    {
        double sum = 0.146 + 0.232 + 0.621;
        std::vector<double> pi = {0.146 / sum, 0.232 / sum, 0.621 / sum};
        double veff_sf = v_eff(0.527, pi, ts, 1, 2027.0);
        CHECK(100.0 * (veff_sf / kV1_2027 - 1.0) == doctest::Approx(-15.72).epsilon(0.002));
        double veff_ny = v_eff(0.527, pi, ts, 3, 2027.0);
        CHECK(100.0 * (veff_ny / kV3_2027 - 1.0) == doctest::Approx(8.91).epsilon(0.002));
    }
}

TEST_CASE("v_eff with shares concentrated on the home tier equals V(home)") {
    for (double r_o : {0.0, 0.25, 0.559, 1.0}) {
        std::vector<double> pi = {0.0, 1.0, 0.0};
        CHECK(v_eff(r_o, pi, tiers(), 2, 2027.0) ==
              doctest::Approx(logistic_v(kTier2, 2027.0)).epsilon(1e-15));
    }
}

TEST_CASE("v_eff lies between the min and max tier velocities") {
    Rng rng{777};
    TierSet ts = tiers();
    for (int iter = 0; iter < 300; ++iter) {
        double a = rng.unit(), b = rng.unit(), c = rng.unit();
        double sum = a + b + c;
        if (sum <= 0.0) continue;
        std::vector<double> pi = {a / sum, b / sum, c / sum};
        double r_o = rng.unit();
        int home = 1 + static_cast<int>(rng.next() % 3);
        double tau = 2024.0 + 8.0 * rng.unit();
        double lo = std::min({logistic_v(kTier1, tau), logistic_v(kTier2, tau),
                              logistic_v(kTier3, tau)});
        double hi = std::max({logistic_v(kTier1, tau), logistic_v(kTier2, tau),
                              logistic_v(kTier3, tau)});
        double v = v_eff(r_o, pi, ts, home, tau);
        CHECK(v >= lo - 1e-12);
        CHECK(v <= hi + 1e-12);
    }
}

TEST_CASE("v_eff rejects non-normalized shares") {
    CHECK_THROWS_AS(v_eff(0.5, std::vector<double>{0.5, 0.2, 0.2}, tiers(), 1, 2027.0), Error);
    CHECK_THROWS_AS(v_eff(0.5, std::vector<double>{0.5, 0.5}, tiers(), 1, 2027.0), Error);
    CHECK_THROWS_AS(v_eff(1.5, std::vector<double>{0.2, 0.3, 0.5}, tiers(), 1, 2027.0), Error);
}

TEST_CASE("tier parameter validation") {
    CHECK_THROWS_AS(TierParams({0.0, 2024.25, 0.92}).validate(), Error);
    CHECK_THROWS_AS(TierParams({0.85, 2024.25, 1.02}).validate(), Error);
    CHECK_THROWS_AS(TierParams({0.85, 2024.25, 0.0}).validate(), Error);
    CHECK_THROWS_AS(tiers().tier(0), Error);
    CHECK_THROWS_AS(tiers().tier(4), Error);
}

TEST_CASE("shipped tier parameters match the calibration table") {
    TierSet ts = load_tier_params_file(std::string(ATE_TEST_DATA_DIR) + "/tier_params.tsv");
    CHECK(ts.tier(1).k == doctest::Approx(0.85).epsilon(1e-15));
    CHECK(ts.tier(1).tau0 == doctest::Approx(2024.25).epsilon(1e-15));
    CHECK(ts.tier(1).L == doctest::Approx(0.92).epsilon(1e-15));
    CHECK(ts.tier(2).k == doctest::Approx(0.62).epsilon(1e-15));
    CHECK(ts.tier(2).tau0 == doctest::Approx(2025.00).epsilon(1e-15));
    CHECK(ts.tier(2).L == doctest::Approx(0.85).epsilon(1e-15));
    CHECK(ts.tier(3).k == doctest::Approx(0.48).epsilon(1e-15));
    CHECK(ts.tier(3).tau0 == doctest::Approx(2025.75).epsilon(1e-15));
    CHECK(ts.tier(3).L == doctest::Approx(0.78).epsilon(1e-15));
}

TEST_CASE("shipped region table assigns the documented tiers") {
    auto regions = load_regions_file(std::string(ATE_TEST_DATA_DIR) + "/regions.tsv");
    REQUIRE(regions.size() == 5);
    auto tier_of = [&](const std::string& id) {
        for (const auto& r : regions)
            if (r.region_id == id) return r.tier;
        FAIL("missing region " << id);
        return -1;
    };
    CHECK(tier_of("sf_bay") == 1);
    CHECK(tier_of("seattle") == 2);
    CHECK(tier_of("austin") == 2);
    CHECK(tier_of("boston") == 2);
    CHECK(tier_of("new_york") == 3);
}
