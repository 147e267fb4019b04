#pragma once

#include <string>
#include <vector>

#include "surveyscope/diagnostics.hpp"
#include "surveyscope/ssr.hpp"

namespace surveyscope {

class LlmClient;

struct ParseConfig {
    // Sections whose body exceeds max_section_words (or falls below
    // min_section_words) are dropped as length anomalies.
    std::size_t max_section_words = 8000;
    std::size_t min_section_words = 0;
    std::vector<std::string> reference_heading_names{"References",
                                                     "Bibliography",
                                                     "Works Cited"};
    bool refine_titles = false;

    void validate() const;
};

/// Rule-based structure extraction: ATX/Setext headings become the outline
/// (Markdown depth = level), text attaches to the nearest preceding heading,
/// length-anomalous sections are dropped with a warning, whitespace and
/// control characters are cleaned. A heading-less document yields one
/// synthetic level-1 section titled from `topic`. Total over arbitrary
/// bytes; never throws.
SurveyDocument parse_markdown(std::string_view markdown, const std::string& id,
                              const std::string& topic, Discipline discipline,
                              const ParseConfig& cfg = {},
                              DiagnosticSink* diag = nullptr);

/// Locates the references section by heading name and splits it into
/// entries: numbered markers, then hanging-indent blocks, then blank lines —
/// the first splitter producing at least two entries wins. Titles come from
/// the longest quoted span, else the span between the end of the author list
/// and the next sentence period. Returns an empty list when no references
/// heading is present.
std::vector<ReferenceEntry> extract_references(std::string_view markdown,
                                               const ParseConfig& cfg = {},
                                               DiagnosticSink* diag = nullptr);

/// Re-extracts titles through the LLM for entries whose heuristic title is
/// empty or shorter than three words; other entries pass through untouched.
/// Output order, length, and raw_text always match the input. A failed call
/// leaves the entry unchanged and records a warning.
std::vector<ReferenceEntry> refine_reference_titles(
    const std::vector<ReferenceEntry>& entries, LlmClient& client,
    DiagnosticSink* diag = nullptr);

/// parse_markdown + extract_references (+ optional title refinement when
/// cfg.refine_titles is set and a client is supplied).
SurveyDocument parse_survey(std::string_view markdown, const std::string& id,
                            const std::string& topic, Discipline discipline,
                            const ParseConfig& cfg = {},
                            LlmClient* client = nullptr,
                            DiagnosticSink* diag = nullptr);

/// Heuristic title extraction from one bibliography entry; empty when no
/// rule applies.
std::string extract_reference_title(std::string_view entry_text);

}  // namespace surveyscope
