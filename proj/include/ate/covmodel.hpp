#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ate/types.hpp"

namespace ate {

struct CovCategory {
    std::string label;                 // "P1".."P4"
    std::string name;                  // e.g. "interpersonal"
    double multiplier = 1.0;           // (0,1)
    std::vector<std::string> keywords; // lowercase phrases, non-empty
};

struct CovRubric {
    std::vector<CovCategory> categories; // exactly four

    void validate() const;
    static CovRubric load_json(std::istream& in, const std::string& source_name = "<stream>");
    static CovRubric load_json_file(const std::string& path);

    // Penalty weights (1 - multiplier) scaled by `factor`; factor 0.5 moves
    // each multiplier halfway to 1.0 (0.75 -> 0.875).
    CovRubric with_scaled_penalties(double factor) const;
};

struct CovResult {
    std::string task_id;
    double cov = 1.0; // product of multipliers of distinct triggered categories
    std::vector<std::string> triggered; // category labels, rubric order
    std::vector<std::pair<std::string, std::string>> matched_phrases; // (label, phrase)
};

// Case-insensitive matching. Single-token phrases anchor at a word start and
// match as a prefix ("diagnos" hits "diagnosis" and "diagnoses" but not the
// inside of "immediately"); multi-word phrases match as plain substrings.
// A category counts once no matter how many of its phrases hit.
bool phrase_in_text(std::string_view lowercased_text, std::string_view phrase);

CovResult score_cov(std::string_view text, const CovRubric& rubric, std::string_view task_id = "");

// Unweighted arithmetic mean of per-task cov over one occupation's tasks.
// All records must share one soc_code; empty corpus is an error.
double occupation_mean_cov(std::span<const TaskRecord> corpus, const CovRubric& rubric);

struct PilotNewFlag {
    std::string soc_code;
    std::string task_id;
    std::vector<std::string> categories; // triggered under semantic rubric only
};

struct PilotReport {
    std::size_t corpus_size = 0;
    std::size_t keyword_flagged = 0;
    std::size_t semantic_flagged = 0;
    double keyword_share = 0;  // fraction of corpus
    double semantic_share = 0;
    std::vector<PilotNewFlag> newly_flagged; // flagged by semantic, not keyword
};

// Both rubrics must share the four-category structure.
PilotReport pilot_compare(std::span<const TaskRecord> corpus, const CovRubric& keyword_rubric,
                          const CovRubric& semantic_rubric);

} // namespace ate
