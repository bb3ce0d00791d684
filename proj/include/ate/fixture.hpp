#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ate/types.hpp"

namespace ate {

struct FixtureSpec {
    std::uint64_t seed = 1;
    int n_occupations = 10;
    int tasks_per_occ = 8;
    // Employment rows are generated per (occupation, region).
    std::vector<std::string> region_ids = {"seattle", "sf_bay", "austin", "new_york", "boston"};
};

// Deterministic synthetic corpus: a pure function of the spec. Occupations
// cycle through the six study SOC major groups, a known fraction of task
// texts carry rubric keywords and modifier patterns, and all type invariants
// hold on the output.
Dataset generate_fixture_corpus(const FixtureSpec& spec);

} // namespace ate
