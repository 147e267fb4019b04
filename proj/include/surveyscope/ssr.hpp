#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "surveyscope/discipline.hpp"

namespace surveyscope {

struct OutlineEntry {
    int level = 1;  // 1 = top-level section
    std::string title;
};

struct ContentEntry {
    std::string heading;
    std::string body;
    int figure_count = 0;
    int table_count = 0;
    int equation_count = 0;
};

struct ReferenceEntry {
    std::string raw_text;
    std::string title;  // may be empty before refinement
};

/// The structured representation of one survey: hierarchical outline,
/// per-section content, and the reference list, plus discipline metadata.
/// Outline and content entries correspond one-to-one in order.
struct SurveyDocument {
    std::string id;
    std::string topic;
    Discipline discipline = Discipline::ComputerScience;
    std::vector<OutlineEntry> outline;
    std::vector<ContentEntry> content;
    std::vector<ReferenceEntry> references;
};

struct StructuralStats {
    long images = 0;
    long tables = 0;
    long equations = 0;
    long paragraphs = 0;
    long words = 0;
    long sentences = 0;
    long citations = 0;
    long references = 0;
};

/// Fieldwise generated/baseline ratios; 0/0 maps to 0 so aggregate tables
/// stay finite.
struct RichnessRatios {
    double images = 0;
    double tables = 0;
    double equations = 0;
    double paragraphs = 0;
    double words = 0;
    double sentences = 0;
    double citations = 0;
    double references = 0;
};

/// Counting rules (applied to the raw Markdown the document was parsed from):
///   words      whitespace tokens after stripping markup
///   sentences  runs ending in '.', '!' or '?' followed by whitespace/end
///   paragraphs blank-line-separated non-empty blocks inside content bodies
///   images     Markdown image directives
///   tables     Markdown table blocks (header + separator row)
///   equations  display-math blocks ($$...$$ or \[...\])
///   citations  bracketed numeric markers plus author-year parentheticals,
///              counted before the references heading only
///   references length of doc.references
StructuralStats compute_stats(const SurveyDocument& doc,
                              std::string_view raw_markdown);

/// Throws BaselineZeroError when a baseline field is 0 but the generated
/// count is positive.
RichnessRatios richness_ratios(const StructuralStats& gen,
                               const StructuralStats& baseline);

void to_json(nlohmann::json& j, const OutlineEntry& e);
void from_json(const nlohmann::json& j, OutlineEntry& e);
void to_json(nlohmann::json& j, const ContentEntry& e);
void from_json(const nlohmann::json& j, ContentEntry& e);
void to_json(nlohmann::json& j, const ReferenceEntry& e);
void from_json(const nlohmann::json& j, ReferenceEntry& e);
void to_json(nlohmann::json& j, const SurveyDocument& doc);
void from_json(const nlohmann::json& j, SurveyDocument& doc);
void to_json(nlohmann::json& j, const StructuralStats& s);
void from_json(const nlohmann::json& j, StructuralStats& s);
void to_json(nlohmann::json& j, const RichnessRatios& r);
void from_json(const nlohmann::json& j, RichnessRatios& r);

SurveyDocument load_survey_json(const std::string& path);
void save_survey_json(const SurveyDocument& doc, const std::string& path);

}  // namespace surveyscope
