#include "surveyscope/judge.hpp"

#include <algorithm>
#include <set>

#include "surveyscope/errors.hpp"
#include "surveyscope/rng.hpp"
#include "surveyscope/text_util.hpp"

namespace surveyscope {

void to_json(nlohmann::json& j, const PreferencePair& p) {
    j = nlohmann::json{
        {"winner_id", p.winner_id},
        {"loser_id", p.loser_id},
        {"component", std::string(component_lower_name(p.component))},
        {"discipline", std::string(discipline_name(p.discipline))}};
}

void from_json(const nlohmann::json& j, PreferencePair& p) {
    j.at("winner_id").get_to(p.winner_id);
    j.at("loser_id").get_to(p.loser_id);
    p.component = component_from_string(j.at("component").get<std::string>());
    p.discipline =
        discipline_from_string(j.at("discipline").get<std::string>());
}

namespace {

const prompts::PromptLibrary& library(const JudgeOptions& opts) {
    return opts.prompt_library ? *opts.prompt_library
                               : prompts::PromptLibrary::embedded();
}

nlohmann::json quick_stats(const SurveyDocument& doc) {
    long words = 0;
    long figures = 0, tables = 0, equations = 0;
    for (const auto& c : doc.content) {
        words += static_cast<long>(count_words(c.body));
        figures += c.figure_count;
        tables += c.table_count;
        equations += c.equation_count;
    }
    return nlohmann::json{{"sections", doc.content.size()},
                          {"words", words},
                          {"figures", figures},
                          {"tables", tables},
                          {"equations", equations},
                          {"references", doc.references.size()}};
}

std::vector<AspectJudgment> parse_judgment(const std::string& content,
                                           const Rubric& rubric) {
    auto payload = extract_json_payload(content);
    if (payload.empty()) throw SchemaError("judge: no JSON in response");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(payload);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("judge: ") + e.what());
    }
    auto it = j.find("aspects");
    if (it == j.end() || !it->is_array())
        throw SchemaError("judge: missing 'aspects' array");

    std::vector<AspectJudgment> judgments;
    for (const auto& item : *it) {
        AspectJudgment a;
        if (!item.is_object() || !item.contains("aspect_name") ||
            !item.contains("score"))
            throw SchemaError("judge: malformed aspect judgment");
        a.aspect_name = item.at("aspect_name").get<std::string>();
        if (!item.at("score").is_number_integer())
            throw SchemaError("judge: score must be an integer");
        a.score = item.at("score").get<int>();
        if (a.score < 1 || a.score > 5)
            throw SchemaError("judge: score " + std::to_string(a.score) +
                              " out of range [1,5]");
        a.notes = item.value("notes", std::string());
        judgments.push_back(std::move(a));
    }

    // Every rubric aspect must be present (first occurrence wins).
    std::vector<AspectJudgment> ordered;
    for (const auto& ra : rubric.aspects) {
        auto found = std::find_if(judgments.begin(), judgments.end(),
                                  [&](const AspectJudgment& a) {
                                      return a.aspect_name == ra.aspect.name;
                                  });
        if (found == judgments.end())
            throw MissingAspectError("judge: aspect '" + ra.aspect.name +
                                     "' absent from response");
        ordered.push_back(*found);
    }
    return ordered;
}

}  // namespace

std::string judge_payload_json(const SurveyDocument& doc, Component component,
                               const JudgeOptions& opts) {
    switch (component) {
        case Component::Outline: {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& e : doc.outline)
                arr.push_back("L" + std::to_string(e.level) + ": " + e.title);
            return arr.dump();
        }
        case Component::Content: {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& e : doc.content)
                arr.push_back(
                    {{"heading", e.heading},
                     {"body",
                      head_tail_trim(e.body, opts.section_word_budget)}});
            return arr.dump();
        }
        case Component::Reference: {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& e : doc.references)
                arr.push_back(e.title.empty() ? e.raw_text : e.title);
            return arr.dump();
        }
    }
    return "[]";
}

ComponentScore score_component(const SurveyDocument& doc, Component component,
                               const Rubric& rubric, int trials,
                               LlmClient& client, const JudgeOptions& opts) {
    if (rubric.component != component)
        throw DataError("score_component: rubric component mismatch");
    if (trials < 1) throw DataError("score_component: trials must be >= 1");

    ComponentScore result;
    result.survey_id = doc.id;
    result.component = component;

    std::string criteria = rubric_criteria_payload(rubric).dump();
    std::string payload = judge_payload_json(doc, component, opts);
    std::string stats =
        component == Component::Content ? quick_stats(doc).dump() : "{}";
    std::string category(discipline_name(rubric.discipline));

    for (int trial = 0; trial < trials; ++trial) {
        std::string last_error;
        bool done = false;
        for (int attempt = 0; attempt <= opts.schema_retries && !done;
             ++attempt) {
            auto messages = prompts::render_judge(component, category, criteria,
                                                  payload, stats, library(opts));
            auto result_text = client.complete(
                messages, "judge:" + doc.id + ":" +
                              std::string(component_lower_name(component)) +
                              ":t" + std::to_string(trial) + ":a" +
                              std::to_string(attempt));
            try {
                result.trials.push_back(
                    parse_judgment(result_text.content, rubric));
                done = true;
            } catch (const MissingAspectError&) {
                throw;
            } catch (const SchemaError& e) {
                last_error = e.what();
            }
        }
        if (!done)
            throw SchemaError("score_component: trial " +
                              std::to_string(trial) +
                              " failed after retries: " + last_error);
    }

    for (const auto& ra : rubric.aspects) {
        double sum = 0.0;
        for (const auto& trial : result.trials) {
            auto found = std::find_if(trial.begin(), trial.end(),
                                      [&](const AspectJudgment& a) {
                                          return a.aspect_name == ra.aspect.name;
                                      });
            sum += static_cast<double>(found->score);
        }
        result.averaged[ra.aspect.name] =
            sum / static_cast<double>(result.trials.size());
    }
    return result;
}

PairwiseOutcome pairwise_compare(const SurveyDocument& a,
                                 const SurveyDocument& b, Component component,
                                 const Rubric& rubric, LlmClient& client,
                                 const JudgeOptions& opts) {
    if (a.id == b.id) throw DataError("pairwise_compare: identical surveys");
    if (a.discipline != b.discipline)
        throw DataError("pairwise_compare: discipline mismatch");

    std::string criteria = rubric_criteria_payload(rubric).dump();
    std::string category(discipline_name(a.discipline));
    std::string payload_a = judge_payload_json(a, component, opts);
    std::string payload_b = judge_payload_json(b, component, opts);

    auto one_verdict = [&](const std::string& first_payload,
                           const std::string& second_payload,
                           const std::string& salt) -> char {
        std::string last_error;
        for (int attempt = 0; attempt <= opts.schema_retries; ++attempt) {
            auto messages = prompts::render_pairwise(
                component, category, criteria, first_payload, second_payload,
                library(opts));
            auto result = client.complete(
                messages, salt + ":a" + std::to_string(attempt));
            try {
                auto payload = extract_json_payload(result.content);
                if (payload.empty())
                    throw SchemaError("pairwise: no JSON in response");
                auto j = nlohmann::json::parse(payload);
                auto winner = j.at("winner").get<std::string>();
                if (winner == "A" || winner == "a") return 'A';
                if (winner == "B" || winner == "b") return 'B';
                throw SchemaError("pairwise: winner must be 'A' or 'B'");
            } catch (const nlohmann::json::exception& e) {
                last_error = e.what();
            } catch (const SchemaError& e) {
                last_error = e.what();
            }
        }
        throw SchemaError("pairwise_compare(" + a.id + " vs " + b.id +
                          ") failed after retries: " + last_error);
    };

    std::string base_salt = "pair:" + a.id + ":" + b.id + ":" +
                            std::string(component_lower_name(component));
    char forward = one_verdict(payload_a, payload_b, base_salt + ":fwd");
    char swapped = one_verdict(payload_b, payload_a, base_salt + ":swp");

    // Position-swapped verdicts must agree on the same document.
    const SurveyDocument* winner = nullptr;
    if (forward == 'A' && swapped == 'B') winner = &a;
    if (forward == 'B' && swapped == 'A') winner = &b;
    if (winner == nullptr) return {false, {}};

    PairwiseOutcome outcome;
    outcome.consistent = true;
    outcome.pair.winner_id = winner->id;
    outcome.pair.loser_id = winner == &a ? b.id : a.id;
    outcome.pair.component = component;
    outcome.pair.discipline = a.discipline;
    return outcome;
}

std::vector<PreferencePair> double_round_robin(
    const std::vector<SurveyDocument>& docs, Component component,
    const Rubric& rubric, LlmClient& client, std::uint64_t seed,
    const JudgeOptions& opts,
    std::vector<std::pair<std::string, std::string>>* inconsistent) {
    if (docs.size() < 2)
        throw DataError("double_round_robin: need at least 2 surveys");

    auto rng = seeded_rng(seed);
    std::vector<PreferencePair> pairs;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        for (std::size_t j = i + 1; j < docs.size(); ++j) {
            bool flip = (rng() & 1) != 0;
            const auto& first = flip ? docs[j] : docs[i];
            const auto& second = flip ? docs[i] : docs[j];
            auto outcome =
                pairwise_compare(first, second, component, rubric, client, opts);
            if (outcome.consistent) {
                pairs.push_back(outcome.pair);
            } else if (inconsistent != nullptr) {
                inconsistent->emplace_back(first.id, second.id);
            }
        }
    }
    return pairs;
}

nlohmann::json component_score_json(const ComponentScore& score) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& trial : score.trials) {
        nlohmann::json t = nlohmann::json::array();
        for (const auto& a : trial)
            t.push_back({{"aspect_name", a.aspect_name},
                         {"score", a.score},
                         {"notes", a.notes}});
        trials.push_back(t);
    }
    return nlohmann::json{
        {"survey_id", score.survey_id},
        {"component", std::string(component_lower_name(score.component))},
        {"averaged", score.averaged},
        {"trials", trials}};
}

}  // namespace surveyscope
