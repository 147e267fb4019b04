#include "surveyscope/ssr.hpp"

#include <filesystem>
#include <fstream>

#include "markdown_scan.hpp"
#include "surveyscope/errors.hpp"
#include "surveyscope/text_util.hpp"

namespace surveyscope {

StructuralStats compute_stats(const SurveyDocument& doc,
                              std::string_view raw_markdown) {
    StructuralStats stats;
    stats.references = static_cast<long>(doc.references.size());

    stats.images = md::count_images(raw_markdown);
    stats.tables = md::count_table_blocks(raw_markdown);
    stats.equations = md::count_display_equations(raw_markdown);

    // Bibliography lines would read as citation markers, so counting stops
    // at the references heading.
    auto refs = md::find_references_section(
        raw_markdown, md::default_reference_heading_names());
    std::string_view in_text = refs.found
                                   ? raw_markdown.substr(0, refs.heading_offset)
                                   : raw_markdown;
    stats.citations = md::count_citation_markers(in_text);

    std::string stripped = md::strip_markup(raw_markdown);
    stats.words = static_cast<long>(count_words(stripped));
    stats.sentences = md::count_sentences(stripped);

    for (const auto& entry : doc.content)
        stats.paragraphs += md::count_blocks(entry.body);

    return stats;
}

namespace {

double ratio_field(long gen, long baseline, const char* field) {
    if (baseline == 0) {
        if (gen == 0) return 0.0;
        throw BaselineZeroError(std::string("baseline field '") + field +
                                "' is zero while generated count is " +
                                std::to_string(gen));
    }
    return static_cast<double>(gen) / static_cast<double>(baseline);
}

}  // namespace

RichnessRatios richness_ratios(const StructuralStats& gen,
                               const StructuralStats& baseline) {
    RichnessRatios r;
    r.images = ratio_field(gen.images, baseline.images, "images");
    r.tables = ratio_field(gen.tables, baseline.tables, "tables");
    r.equations = ratio_field(gen.equations, baseline.equations, "equations");
    r.paragraphs =
        ratio_field(gen.paragraphs, baseline.paragraphs, "paragraphs");
    r.words = ratio_field(gen.words, baseline.words, "words");
    r.sentences = ratio_field(gen.sentences, baseline.sentences, "sentences");
    r.citations = ratio_field(gen.citations, baseline.citations, "citations");
    r.references =
        ratio_field(gen.references, baseline.references, "references");
    return r;
}

void to_json(nlohmann::json& j, const OutlineEntry& e) {
    j = nlohmann::json{{"level", e.level}, {"title", e.title}};
}

void from_json(const nlohmann::json& j, OutlineEntry& e) {
    j.at("level").get_to(e.level);
    j.at("title").get_to(e.title);
}

void to_json(nlohmann::json& j, const ContentEntry& e) {
    j = nlohmann::json{{"heading", e.heading},
                       {"body", e.body},
                       {"figure_count", e.figure_count},
                       {"table_count", e.table_count},
                       {"equation_count", e.equation_count}};
}

void from_json(const nlohmann::json& j, ContentEntry& e) {
    j.at("heading").get_to(e.heading);
    j.at("body").get_to(e.body);
    e.figure_count = j.value("figure_count", 0);
    e.table_count = j.value("table_count", 0);
    e.equation_count = j.value("equation_count", 0);
}

void to_json(nlohmann::json& j, const ReferenceEntry& e) {
    j = nlohmann::json{{"raw_text", e.raw_text}, {"title", e.title}};
}

void from_json(const nlohmann::json& j, ReferenceEntry& e) {
    j.at("raw_text").get_to(e.raw_text);
    e.title = j.value("title", std::string());
}

void to_json(nlohmann::json& j, const SurveyDocument& doc) {
    j = nlohmann::json{{"id", doc.id},
                       {"topic", doc.topic},
                       {"discipline", std::string(discipline_name(doc.discipline))},
                       {"outline", doc.outline},
                       {"content", doc.content},
                       {"references", doc.references}};
}

void from_json(const nlohmann::json& j, SurveyDocument& doc) {
    j.at("id").get_to(doc.id);
    j.at("topic").get_to(doc.topic);
    doc.discipline =
        discipline_from_string(j.at("discipline").get<std::string>());
    doc.outline = j.value("outline", std::vector<OutlineEntry>{});
    doc.content = j.value("content", std::vector<ContentEntry>{});
    doc.references = j.value("references", std::vector<ReferenceEntry>{});
}

void to_json(nlohmann::json& j, const StructuralStats& s) {
    j = nlohmann::json{{"images", s.images},       {"tables", s.tables},
                       {"equations", s.equations}, {"paragraphs", s.paragraphs},
                       {"words", s.words},         {"sentences", s.sentences},
                       {"citations", s.citations}, {"references", s.references}};
}

void from_json(const nlohmann::json& j, StructuralStats& s) {
    j.at("images").get_to(s.images);
    j.at("tables").get_to(s.tables);
    j.at("equations").get_to(s.equations);
    j.at("paragraphs").get_to(s.paragraphs);
    j.at("words").get_to(s.words);
    j.at("sentences").get_to(s.sentences);
    j.at("citations").get_to(s.citations);
    j.at("references").get_to(s.references);
}

void to_json(nlohmann::json& j, const RichnessRatios& r) {
    j = nlohmann::json{{"images", r.images},       {"tables", r.tables},
                       {"equations", r.equations}, {"paragraphs", r.paragraphs},
                       {"words", r.words},         {"sentences", r.sentences},
                       {"citations", r.citations}, {"references", r.references}};
}

void from_json(const nlohmann::json& j, RichnessRatios& r) {
    j.at("images").get_to(r.images);
    j.at("tables").get_to(r.tables);
    j.at("equations").get_to(r.equations);
    j.at("paragraphs").get_to(r.paragraphs);
    j.at("words").get_to(r.words);
    j.at("sentences").get_to(r.sentences);
    j.at("citations").get_to(r.citations);
    j.at("references").get_to(r.references);
}

SurveyDocument load_survey_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open survey file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid survey JSON in " + path + ": " + e.what());
    }
    try {
        return j.get<SurveyDocument>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("survey schema violation in " + path + ": " + e.what());
    }
}

void save_survey_json(const SurveyDocument& doc, const std::string& path) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw DataError("cannot write survey file: " + path);
    out << nlohmann::json(doc).dump(2) << '\n';
}

}  // namespace surveyscope
