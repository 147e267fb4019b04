#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "surveyscope/component.hpp"
#include "surveyscope/discipline.hpp"
#include "surveyscope/llm_client.hpp"
#include "surveyscope/prompts.hpp"
#include "surveyscope/rubric.hpp"
#include "surveyscope/ssr.hpp"

namespace surveyscope {

struct AspectJudgment {
    std::string aspect_name;
    int score = 0;  // integer in {1..5}
    std::string notes;
};

struct PreferencePair {
    std::string winner_id;
    std::string loser_id;
    Component component = Component::Outline;
    Discipline discipline = Discipline::ComputerScience;
};

void to_json(nlohmann::json& j, const PreferencePair& p);
void from_json(const nlohmann::json& j, PreferencePair& p);

struct JudgeOptions {
    int schema_retries = 3;               // extra attempts after the first
    std::size_t section_word_budget = 400;  // per content section, head+tail
    const prompts::PromptLibrary* prompt_library = nullptr;
};

/// Per-trial raw judgments plus the per-aspect mean over trials.
struct ComponentScore {
    std::string survey_id;
    Component component = Component::Outline;
    std::map<std::string, double> averaged;          // aspect -> mean in [1,5]
    std::vector<std::vector<AspectJudgment>> trials;  // raw integer scores
};

/// One call per trial covering every rubric aspect; the response must be
/// {"aspects":[{"aspect_name","score","notes"}...]} with integer scores in
/// {1..5} (SchemaError otherwise) and must cover every rubric aspect
/// (MissingAspectError otherwise).
ComponentScore score_component(const SurveyDocument& doc, Component component,
                               const Rubric& rubric, int trials,
                               LlmClient& client, const JudgeOptions& opts = {});

struct PairwiseOutcome {
    bool consistent = false;
    PreferencePair pair;  // valid only when consistent
};

/// Two swapped calls; agreeing verdicts yield the winner, disagreeing
/// verdicts mark the pair inconsistent (excluded from preference sets).
PairwiseOutcome pairwise_compare(const SurveyDocument& a,
                                 const SurveyDocument& b, Component component,
                                 const Rubric& rubric, LlmClient& client,
                                 const JudgeOptions& opts = {});

/// Every unordered pair compared once through pairwise_compare (which
/// issues both orderings); the seeded generator randomizes which document
/// takes the first slot. Inconsistent pairs are dropped and optionally
/// reported for audit.
std::vector<PreferencePair> double_round_robin(
    const std::vector<SurveyDocument>& docs, Component component,
    const Rubric& rubric, LlmClient& client, std::uint64_t seed,
    const JudgeOptions& opts = {},
    std::vector<std::pair<std::string, std::string>>* inconsistent = nullptr);

/// Component payload serialized for the scoring prompts (single line).
std::string judge_payload_json(const SurveyDocument& doc, Component component,
                               const JudgeOptions& opts);

nlohmann::json component_score_json(const ComponentScore& score);

}  // namespace surveyscope
