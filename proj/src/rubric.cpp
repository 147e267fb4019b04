#include "surveyscope/rubric.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "surveyscope/alignment.hpp"
#include "surveyscope/errors.hpp"
#include "surveyscope/text_util.hpp"

namespace surveyscope {

const std::vector<Aspect>& seed_aspects(Component component) {
    static const std::vector<Aspect> outline{
        {"Substantive Integrity",
         "Evaluates depth, breadth, and scholarly merit of the content "
         "coverage."},
        {"Structural Coherence",
         "Assesses logical architecture and organizational flow of the "
         "outline."},
        {"Formal Precision",
         "Examines the technical execution of hierarchy and presentation."},
    };
    static const std::vector<Aspect> content{
        {"Scope and Relevance",
         "Evaluates breadth and alignment with the central research theme."},
        {"Structural Coherence",
         "Assesses logical organization, transitions, and narrative "
         "consistency."},
        {"Synthesis and Integration",
         "Measures the ability to construct cohesive frameworks."},
        {"Critical Insight and Novelty",
         "Examines the depth of critique, original frameworks, and research "
         "gaps."},
        {"Scholarly Communication",
         "Reviews clarity, terminology precision, and citation standards."},
    };
    static const std::vector<Aspect> reference{
        {"Bibliometric Comprehensiveness",
         "Evaluates coverage extent and inclusion of seminal works."},
        {"Evidential Integrity",
         "Assesses the reliability of claims and correctness of "
         "attributions."},
        {"Referential Pertinence and Compliance",
         "Examines thematic alignment and citation formatting standards."},
    };
    switch (component) {
        case Component::Outline: return outline;
        case Component::Content: return content;
        case Component::Reference: return reference;
    }
    return outline;
}

std::map<Component, std::vector<Aspect>> load_aspect_catalog(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open aspect catalog: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid aspect catalog in " + path + ": " + e.what());
    }
    std::map<Component, std::vector<Aspect>> catalog;
    for (Component component : kAllComponents) {
        auto key = std::string(component_lower_name(component));
        if (!j.contains(key)) continue;
        std::vector<Aspect> aspects;
        for (const auto& item : j.at(key))
            aspects.push_back({item.at("name").get<std::string>(),
                               item.value("description", std::string())});
        if (aspects.empty())
            throw DataError("aspect catalog has empty list for " + key);
        catalog[component] = std::move(aspects);
    }
    return catalog;
}

namespace {

const prompts::PromptLibrary& library(const RubricOptions& opts) {
    return opts.prompt_library ? *opts.prompt_library
                               : prompts::PromptLibrary::embedded();
}

nlohmann::json parse_schema_json(const std::string& content,
                                 const char* what) {
    auto payload = extract_json_payload(content);
    if (payload.empty())
        throw SchemaError(std::string(what) + ": no JSON value in response");
    try {
        return nlohmann::json::parse(payload);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string(what) + ": " + e.what());
    }
}

Criterion criterion_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_object()) throw SchemaError(std::string(what) + ": not an object");
    Criterion c;
    for (const char* field : {"criterion_name", "description", "example"}) {
        auto it = j.find(field);
        if (it == j.end() || !it->is_string() ||
            trim_view(it->get<std::string>()).empty())
            throw SchemaError(std::string(what) + ": missing field '" + field +
                              "'");
    }
    c.criterion_name = j.at("criterion_name").get<std::string>();
    c.description = j.at("description").get<std::string>();
    c.example = j.at("example").get<std::string>();
    return c;
}

std::vector<Criterion> criteria_from_array(const nlohmann::json& arr, int n,
                                           const char* what) {
    if (!arr.is_array())
        throw SchemaError(std::string(what) + ": criteria list is not an array");
    if (static_cast<int>(arr.size()) != n)
        throw SchemaError(std::string(what) + ": expected " +
                          std::to_string(n) + " criteria, got " +
                          std::to_string(arr.size()));
    std::vector<Criterion> out;
    out.reserve(arr.size());
    for (const auto& item : arr) out.push_back(criterion_from_json(item, what));
    return out;
}

}  // namespace

std::vector<Aspect> aggregate_aspects(const std::vector<Aspect>& raw,
                                      int target_count, LlmClient& client,
                                      const std::string& category_name,
                                      const RubricOptions& opts) {
    if (raw.empty()) throw DataError("aggregate_aspects: empty aspect list");
    if (target_count <= 0 || target_count > static_cast<int>(raw.size()))
        throw DataError("aggregate_aspects: target_count out of range");

    std::string formatted;
    for (const auto& a : raw)
        formatted += "- " + a.name + ": " + a.description + "\n";

    std::string last_error;
    for (int attempt = 0; attempt <= opts.schema_retries; ++attempt) {
        auto messages = prompts::render_aggregate(
            category_name, target_count, formatted, raw.size(), library(opts));
        auto result =
            client.complete(messages, "aggregate:" + std::to_string(attempt));
        try {
            auto j = parse_schema_json(result.content, "aggregate");
            if (!j.is_array())
                throw SchemaError("aggregate: response is not a JSON array");
            if (static_cast<int>(j.size()) != target_count)
                throw SchemaError("aggregate: expected " +
                                  std::to_string(target_count) +
                                  " aspects, got " + std::to_string(j.size()));
            std::vector<Aspect> aspects;
            for (const auto& item : j) {
                if (!item.is_object() || item.size() != 1)
                    throw SchemaError(
                        "aggregate: each element must be a single-key object");
                const auto& [name, description] = *item.items().begin();
                if (!description.is_string() || trim_view(name).empty())
                    throw SchemaError("aggregate: malformed aspect entry");
                aspects.push_back({name, description.get<std::string>()});
            }
            return aspects;
        } catch (const SchemaError& e) {
            last_error = e.what();
        }
    }
    throw SchemaError("aggregate_aspects failed after retries: " + last_error);
}

std::vector<Criterion> expand_aspect(const Aspect& aspect, Component component,
                                     const std::string& component_text, int n,
                                     LlmClient& client,
                                     const RubricOptions& opts,
                                     const std::string& salt) {
    if (trim_view(component_text).empty())
        throw EmptyComponentError("expand_aspect: empty component text for '" +
                                  aspect.name + "'");
    if (n <= 0) throw DataError("expand_aspect: n must be positive");

    std::string last_error;
    for (int attempt = 0; attempt <= opts.schema_retries; ++attempt) {
        auto messages =
            prompts::render_expand(component, aspect.name, aspect.description,
                                   component_text, n, library(opts));
        auto result = client.complete(
            messages, "expand:" + salt + ":" + std::to_string(attempt));
        try {
            auto j = parse_schema_json(result.content, "expand");
            auto it = j.find("expanded_criteria");
            if (it == j.end())
                throw SchemaError("expand: missing field 'expanded_criteria'");
            return criteria_from_array(*it, n, "expand");
        } catch (const SchemaError& e) {
            last_error = e.what();
        }
    }
    throw SchemaError("expand_aspect('" + aspect.name +
                      "') failed after retries: " + last_error);
}

std::vector<Criterion> merge_criteria(const std::string& aspect_name,
                                      Component component,
                                      const std::vector<Criterion>& all_criteria,
                                      int n, LlmClient& client,
                                      const RubricOptions& opts,
                                      const std::string& salt,
                                      DiagnosticSink* diag) {
    if (all_criteria.empty())
        throw DataError("merge_criteria: empty criteria pool");
    if (n <= 0) throw DataError("merge_criteria: n must be positive");

    nlohmann::json pool = nlohmann::json::array();
    for (const auto& c : all_criteria)
        pool.push_back({{"criterion_name", c.criterion_name},
                        {"description", c.description},
                        {"example", c.example}});

    std::string last_error;
    for (int attempt = 0; attempt <= opts.schema_retries; ++attempt) {
        auto messages = prompts::render_merge(component, aspect_name,
                                              pool.dump(), n, library(opts));
        auto result = client.complete(
            messages, "merge:" + salt + ":" + std::to_string(attempt));
        try {
            auto j = parse_schema_json(result.content, "merge");
            auto it = j.find("merged_expanded_criteria");
            if (it == j.end())
                throw SchemaError(
                    "merge: missing field 'merged_expanded_criteria'");
            auto merged = criteria_from_array(*it, n, "merge");
            std::set<std::string> names;
            for (const auto& c : merged) {
                if (!names.insert(c.criterion_name).second && diag)
                    diag->warn("duplicate_criterion_name",
                               aspect_name + ": '" + c.criterion_name + "'");
            }
            return merged;
        } catch (const SchemaError& e) {
            last_error = e.what();
        }
    }
    throw SchemaError("merge_criteria('" + aspect_name +
                      "') failed after retries: " + last_error);
}

std::string component_text_for_rubric(const SurveyDocument& doc,
                                      Component component,
                                      std::size_t word_budget) {
    auto set = build_entries(doc, component);
    std::string text;
    for (const auto& e : set.entries) {
        text += e;
        text.push_back('\n');
    }
    if (component == Component::Content)
        return head_tail_trim(text, word_budget);
    return trim(text);
}

Rubric build_discipline_rubric(const std::vector<SurveyDocument>& surveys,
                               Component component,
                               const std::vector<Aspect>& seed,
                               LlmClient& client, const RubricOptions& opts,
                               DiagnosticSink* diag) {
    if (surveys.empty())
        throw DataError("build_discipline_rubric: no surveys supplied");
    if (seed.empty())
        throw DataError("build_discipline_rubric: empty seed aspect list");
    Discipline discipline = surveys.front().discipline;
    for (const auto& s : surveys) {
        if (s.discipline != discipline)
            throw DataError(
                "build_discipline_rubric: surveys span multiple disciplines");
    }

    Rubric rubric;
    rubric.discipline = discipline;
    rubric.component = component;
    rubric.provenance.model = client.config().model_name;
    rubric.provenance.expand_n = opts.expand_n;
    rubric.provenance.merge_n = opts.merge_n;
    for (const auto& s : surveys) rubric.provenance.survey_ids.push_back(s.id);

    for (const auto& aspect : seed) {
        std::vector<Criterion> pool;
        for (const auto& survey : surveys) {
            auto text =
                component_text_for_rubric(survey, component,
                                          opts.component_word_budget);
            try {
                auto criteria = expand_aspect(
                    aspect, component, text, opts.expand_n, client, opts,
                    survey.id + ":" + aspect.name);
                pool.insert(pool.end(), criteria.begin(), criteria.end());
            } catch (const SchemaError& e) {
                throw SchemaError("rubric expand failed for aspect '" +
                                  aspect.name + "', survey '" + survey.id +
                                  "': " + e.what());
            }
        }
        std::vector<Criterion> merged;
        try {
            merged = merge_criteria(
                aspect.name, component, pool, opts.merge_n, client, opts,
                std::string(discipline_name(discipline)) + ":" + aspect.name,
                diag);
        } catch (const SchemaError& e) {
            throw SchemaError("rubric merge failed for aspect '" + aspect.name +
                              "': " + e.what());
        }
        rubric.aspects.push_back({aspect, std::move(merged)});
    }

    // Transcript time of the final call, so replayed builds serialize
    // byte-identically.
    rubric.provenance.recorded_at = client.last_timestamp();
    return rubric;
}

nlohmann::json rubric_criteria_payload(const Rubric& rubric) {
    nlohmann::json aspects = nlohmann::json::array();
    for (const auto& ra : rubric.aspects) {
        nlohmann::json criteria = nlohmann::json::array();
        for (const auto& c : ra.criteria)
            criteria.push_back({{"criterion_name", c.criterion_name},
                                {"description", c.description},
                                {"example", c.example}});
        aspects.push_back({{"name", ra.aspect.name},
                           {"description", ra.aspect.description},
                           {"criteria", criteria}});
    }
    return aspects;
}

void to_json(nlohmann::json& j, const Rubric& r) {
    j = nlohmann::json{
        {"discipline", std::string(discipline_name(r.discipline))},
        {"component", std::string(component_lower_name(r.component))},
        {"aspects", rubric_criteria_payload(r)},
        {"provenance",
         {{"survey_ids", r.provenance.survey_ids},
          {"model", r.provenance.model},
          {"recorded_at", r.provenance.recorded_at},
          {"expand_n", r.provenance.expand_n},
          {"merge_n", r.provenance.merge_n}}}};
}

void from_json(const nlohmann::json& j, Rubric& r) {
    r.discipline = discipline_from_string(j.at("discipline").get<std::string>());
    r.component = component_from_string(j.at("component").get<std::string>());
    r.aspects.clear();
    for (const auto& item : j.at("aspects")) {
        RubricAspect ra;
        ra.aspect.name = item.at("name").get<std::string>();
        ra.aspect.description = item.value("description", std::string());
        for (const auto& c : item.at("criteria")) {
            ra.criteria.push_back({c.at("criterion_name").get<std::string>(),
                                   c.value("description", std::string()),
                                   c.value("example", std::string())});
        }
        r.aspects.push_back(std::move(ra));
    }
    if (j.contains("provenance")) {
        const auto& p = j.at("provenance");
        r.provenance.survey_ids =
            p.value("survey_ids", std::vector<std::string>{});
        r.provenance.model = p.value("model", std::string());
        r.provenance.recorded_at = p.value("recorded_at", std::string());
        r.provenance.expand_n = p.value("expand_n", 0);
        r.provenance.merge_n = p.value("merge_n", 0);
    }
}

Rubric load_rubric_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open rubric file: " + path);
    try {
        nlohmann::json j;
        in >> j;
        return j.get<Rubric>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid rubric JSON in " + path + ": " + e.what());
    }
}

void save_rubric_json(const Rubric& r, const std::string& path) {
    std::filesystem::create_directories(
        std::filesystem::path(path).parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write rubric file: " + path);
    out << nlohmann::json(r).dump(2) << '\n';
}

}  // namespace surveyscope
