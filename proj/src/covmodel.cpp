#include "ate/covmodel.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <set>

#include "ate/error.hpp"
#include "ate/text.hpp"

#include <json.hpp>

namespace ate {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

} // namespace

bool phrase_in_text(std::string_view text, std::string_view phrase) {
    if (phrase.empty()) return false;
    bool multi_word = phrase.find(' ') != std::string_view::npos;
    std::size_t pos = 0;
    while ((pos = text.find(phrase, pos)) != std::string_view::npos) {
        if (multi_word) return true;
        // Single tokens anchor at a word start; the end stays open so stored
        // prefixes ("diagnos") hit inflected forms.
        if (pos == 0 || !is_word_char(text[pos - 1])) return true;
        ++pos;
    }
    return false;
}

void CovRubric::validate() const {
    if (categories.size() != 4)
        throw Error("covmodel: rubric must have exactly four categories, got " +
                    std::to_string(categories.size()));
    std::set<std::string> labels;
    for (const auto& cat : categories) {
        if (cat.label.empty()) throw Error("covmodel: rubric category with empty label");
        if (!labels.insert(cat.label).second)
            throw Error("covmodel: duplicate rubric category label '" + cat.label + "'");
        if (cat.multiplier <= 0.0 || cat.multiplier >= 1.0)
            throw Error("covmodel: multiplier for " + cat.label + " must lie in (0,1)");
        if (cat.keywords.empty())
            throw Error("covmodel: category " + cat.label + " has no keywords");
        for (const auto& kw : cat.keywords) {
            if (trim(kw).empty()) throw Error("covmodel: empty keyword in " + cat.label);
            if (kw != to_lower(kw))
                throw Error("covmodel: keyword must be lowercase: '" + kw + "' in " + cat.label);
        }
    }
}

CovRubric CovRubric::load_json(std::istream& in, const std::string& source_name) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error("covmodel: " + source_name + ": " + e.what());
    }
    CovRubric rubric;
    if (!doc.contains("categories") || !doc["categories"].is_array())
        throw Error("covmodel: " + source_name + ": missing 'categories' array");
    for (const auto& item : doc["categories"]) {
        CovCategory cat;
        cat.label = item.value("label", "");
        cat.name = item.value("name", "");
        if (!item.contains("multiplier") || !item["multiplier"].is_number())
            throw Error("covmodel: " + source_name + ": category '" + cat.label +
                        "' missing numeric multiplier");
        cat.multiplier = item["multiplier"].get<double>();
        for (const auto& kw : item.value("keywords", nlohmann::json::array()))
            cat.keywords.push_back(kw.get<std::string>());
        rubric.categories.push_back(std::move(cat));
    }
    rubric.validate();
    return rubric;
}

CovRubric CovRubric::load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("covmodel: cannot open rubric: " + path);
    return load_json(in, path);
}

CovRubric CovRubric::with_scaled_penalties(double factor) const {
    if (factor <= 0.0) throw Error("covmodel: penalty scale factor must be positive");
    CovRubric out = *this;
    for (auto& cat : out.categories) {
        double penalty = (1.0 - cat.multiplier) * factor;
        if (penalty >= 1.0)
            throw Error("covmodel: scaled penalty for " + cat.label + " leaves no coverage");
        cat.multiplier = 1.0 - penalty;
    }
    out.validate();
    return out;
}

CovResult score_cov(std::string_view text, const CovRubric& rubric, std::string_view task_id) {
    if (trim(text).empty()) throw Error("covmodel: cannot score empty task text");
    CovResult result;
    result.task_id = std::string(task_id);
    std::string lowered = to_lower(text);
    for (const auto& cat : rubric.categories) {
        bool hit = false;
        for (const auto& kw : cat.keywords) {
            if (phrase_in_text(lowered, kw)) {
                result.matched_phrases.emplace_back(cat.label, kw);
                hit = true;
            }
        }
        if (hit) {
            result.triggered.push_back(cat.label);
            result.cov *= cat.multiplier; // once per category, however many phrases hit
        }
    }
    return result;
}

double occupation_mean_cov(std::span<const TaskRecord> corpus, const CovRubric& rubric) {
    if (corpus.empty()) throw Error("covmodel: occupation_mean_cov on empty corpus");
    const std::string& soc = corpus.front().soc_code;
    double sum = 0.0;
    for (const auto& task : corpus) {
        if (task.soc_code != soc)
            throw Error("covmodel: occupation_mean_cov saw mixed soc codes (" + soc + " vs " +
                        task.soc_code + ")");
        sum += score_cov(task.text, rubric, task.task_id).cov;
    }
    return sum / static_cast<double>(corpus.size());
}

PilotReport pilot_compare(std::span<const TaskRecord> corpus, const CovRubric& keyword_rubric,
                          const CovRubric& semantic_rubric) {
    keyword_rubric.validate();
    semantic_rubric.validate();

    PilotReport report;
    report.corpus_size = corpus.size();
    for (const auto& task : corpus) {
        CovResult kw = score_cov(task.text, keyword_rubric, task.task_id);
        CovResult sem = score_cov(task.text, semantic_rubric, task.task_id);
        bool kw_flagged = !kw.triggered.empty();
        bool sem_flagged = !sem.triggered.empty();
        if (kw_flagged) ++report.keyword_flagged;
        if (sem_flagged) ++report.semantic_flagged;
        if (sem_flagged && !kw_flagged)
            report.newly_flagged.push_back({task.soc_code, task.task_id, sem.triggered});
    }
    if (report.corpus_size > 0) {
        report.keyword_share =
            static_cast<double>(report.keyword_flagged) / static_cast<double>(report.corpus_size);
        report.semantic_share =
            static_cast<double>(report.semantic_flagged) / static_cast<double>(report.corpus_size);
    }
    std::sort(report.newly_flagged.begin(), report.newly_flagged.end(),
              [](const PilotNewFlag& a, const PilotNewFlag& b) {
                  if (a.soc_code != b.soc_code) return a.soc_code < b.soc_code;
                  return a.task_id < b.task_id;
              });
    return report;
}

} // namespace ate
