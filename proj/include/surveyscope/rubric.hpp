#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "surveyscope/component.hpp"
#include "surveyscope/diagnostics.hpp"
#include "surveyscope/llm_client.hpp"
#include "surveyscope/prompts.hpp"
#include "surveyscope/ssr.hpp"

namespace surveyscope {

struct Aspect {
    std::string name;
    std::string description;
};

struct Criterion {
    std::string criterion_name;
    std::string description;
    std::string example;
};

struct RubricAspect {
    Aspect aspect;
    std::vector<Criterion> criteria;
};

struct RubricProvenance {
    std::vector<std::string> survey_ids;
    std::string model;
    std::string recorded_at;  // timestamp of the last transcript record used
    int expand_n = 0;
    int merge_n = 0;
};

/// Discipline- and component-specific scoring rubric: the fixed seed aspects
/// for the component, each carrying consolidated criteria.
struct Rubric {
    Discipline discipline = Discipline::ComputerScience;
    Component component = Component::Outline;
    std::vector<RubricAspect> aspects;
    RubricProvenance provenance;
};

/// The shipped seed aspect catalog: 3 outline, 5 content, 3 reference
/// aspects.
const std::vector<Aspect>& seed_aspects(Component component);

/// Optional override catalog: JSON {"outline":[{"name","description"}...],
/// "content":[...], "reference":[...]}.
std::map<Component, std::vector<Aspect>> load_aspect_catalog(
    const std::string& path);

struct RubricOptions {
    int expand_n = 3;
    int merge_n = 3;
    int schema_retries = 3;          // extra attempts after the first
    std::size_t component_word_budget = 2000;
    const prompts::PromptLibrary* prompt_library = nullptr;  // null = embedded
};

/// Condenses a raw aspect list to exactly `target_count` aspects through the
/// aggregation prompt; the mandated response shape is a JSON array of
/// single-key objects. Count mismatches and parse failures retry with a
/// fresh salt before surfacing SchemaError.
std::vector<Aspect> aggregate_aspects(const std::vector<Aspect>& raw,
                                      int target_count, LlmClient& client,
                                      const std::string& category_name,
                                      const RubricOptions& opts = {});

/// Instantiates one aspect against one survey's component text, yielding
/// exactly `n` criteria from the expanded_criteria response schema.
std::vector<Criterion> expand_aspect(const Aspect& aspect, Component component,
                                     const std::string& component_text, int n,
                                     LlmClient& client,
                                     const RubricOptions& opts = {},
                                     const std::string& salt = "");

/// Consolidates pooled criteria for one aspect to `n` via the merge prompt's
/// merged_expanded_criteria schema. Duplicate criterion names are accepted
/// with a warning.
std::vector<Criterion> merge_criteria(const std::string& aspect_name,
                                      Component component,
                                      const std::vector<Criterion>& all_criteria,
                                      int n, LlmClient& client,
                                      const RubricOptions& opts = {},
                                      const std::string& salt = "",
                                      DiagnosticSink* diag = nullptr);

/// Full chain: expand each seed aspect per survey, pool, merge per
/// discipline. All surveys must share one discipline; aspect order follows
/// the seed order.
Rubric build_discipline_rubric(const std::vector<SurveyDocument>& surveys,
                               Component component,
                               const std::vector<Aspect>& seed,
                               LlmClient& client,
                               const RubricOptions& opts = {},
                               DiagnosticSink* diag = nullptr);

/// Text payload for the expand prompt (entry rendering joined by newlines,
/// trimmed to the word budget for content).
std::string component_text_for_rubric(const SurveyDocument& doc,
                                      Component component,
                                      std::size_t word_budget);

nlohmann::json rubric_criteria_payload(const Rubric& rubric);

void to_json(nlohmann::json& j, const Rubric& r);
void from_json(const nlohmann::json& j, Rubric& r);
Rubric load_rubric_json(const std::string& path);
void save_rubric_json(const Rubric& r, const std::string& path);

}  // namespace surveyscope
