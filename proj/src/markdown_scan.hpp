#pragma once

// Internal line-level Markdown scanning shared by the parser and the
// structural statistics. Hand-rolled (no regex) so arbitrary byte input
// is safe and fast.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace surveyscope::md {

struct Heading {
    int level = 1;
    std::string title;
};

/// ATX heading: up to 3 leading spaces, 1-6 '#', space or end, title.
/// Returns nothing for empty titles (a bare "#" is treated as text).
std::optional<Heading> match_atx_heading(std::string_view line);

/// Setext underline: a run of '=' (level 1) or of 2+ '-' (level 2).
std::optional<int> match_setext_underline(std::string_view line);

bool is_fence_marker(std::string_view line);

/// GFM table separator row: cells made of ':' and '-' separated by '|'.
bool is_table_separator(std::string_view line);

/// Heading-aware references-section locator: returns the byte offset of the
/// line AFTER the matched heading and the heading's level, or npos when no
/// heading title matches one of `names` (case-insensitive, trailing ':'
/// ignored). The LAST match in the document wins.
struct ReferencesLocation {
    std::size_t body_offset = std::string_view::npos;
    std::size_t heading_offset = std::string_view::npos;
    int level = 0;
    bool found = false;
};
ReferencesLocation find_references_section(
    std::string_view markdown, const std::vector<std::string>& names);

const std::vector<std::string>& default_reference_heading_names();

/// Removes image directives, display-math blocks, table blocks, code-fence
/// markers, heading/list/quote markers, and link URLs; keeps prose.
std::string strip_markup(std::string_view markdown);

long count_images(std::string_view markdown);
long count_display_equations(std::string_view markdown);
long count_table_blocks(std::string_view markdown);
/// Bracketed numeric markers ([3], [4-6], [7,9]) plus author-year
/// parentheticals; one count per marker.
long count_citation_markers(std::string_view text);
/// Runs terminated by '.', '!' or '?' followed by whitespace or end.
long count_sentences(std::string_view stripped_text);
/// Blank-line-separated non-empty blocks.
long count_blocks(std::string_view text);

}  // namespace surveyscope::md
