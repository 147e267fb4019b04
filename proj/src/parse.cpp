#include "surveyscope/parse.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "markdown_scan.hpp"
#include "surveyscope/errors.hpp"
#include "surveyscope/llm_client.hpp"
#include "surveyscope/prompts.hpp"
#include "surveyscope/text_util.hpp"

namespace surveyscope {

namespace {

bool is_digit(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

bool is_upper(char c) {
    return std::isupper(static_cast<unsigned char>(c)) != 0;
}

struct RawSection {
    int level = 1;
    std::string title;
    std::string body;
};

// Collects heading-delimited sections (fence-aware). Setext underlines
// promote the previous plain line to a heading.
std::vector<RawSection> scan_sections(std::string_view markdown,
                                      const std::string& topic) {
    std::vector<RawSection> sections;
    std::string preamble;
    bool in_fence = false;

    auto lines = split_lines(markdown);
    auto append_body = [&](std::string_view line) {
        std::string* target =
            sections.empty() ? &preamble : &sections.back().body;
        *target += std::string(line);
        target->push_back('\n');
    };

    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (md::is_fence_marker(line)) {
            in_fence = !in_fence;
            append_body(line);
            continue;
        }
        if (in_fence) {
            append_body(line);
            continue;
        }
        if (auto h = md::match_atx_heading(line)) {
            sections.push_back({h->level, h->title, ""});
            continue;
        }
        // Setext: heading text line + underline; skip table separators.
        if (i + 1 < lines.size() && !trim_view(line).empty() &&
            !md::is_table_separator(lines[i + 1])) {
            if (auto lvl = md::match_setext_underline(lines[i + 1])) {
                auto title = trim(clean_whitespace(line));
                if (!title.empty()) {
                    sections.push_back({*lvl, title, ""});
                    ++i;
                    continue;
                }
            }
        }
        append_body(line);
    }

    std::string synthetic_title = trim(clean_whitespace(topic));
    if (synthetic_title.empty()) synthetic_title = "Untitled";
    if (sections.empty()) {
        if (!trim_view(preamble).empty())
            sections.push_back({1, synthetic_title, std::move(preamble)});
    } else if (!trim_view(preamble).empty()) {
        sections.insert(sections.begin(),
                        {1, synthetic_title, std::move(preamble)});
    }
    return sections;
}

std::string normalized_heading(std::string_view title) {
    auto t = trim_view(title);
    while (!t.empty() && (t.back() == ':' || t.back() == '.')) {
        t.remove_suffix(1);
        t = trim_view(t);
    }
    return to_lower_ascii(t);
}

bool is_reference_heading(const std::string& title,
                          const std::vector<std::string>& names) {
    auto norm = normalized_heading(title);
    for (const auto& n : names)
        if (normalized_heading(n) == norm) return true;
    return false;
}

// --- reference splitting ---

bool numbered_marker(std::string_view line, std::size_t* marker_len) {
    auto t = trim_view(line);
    if (t.empty()) return false;
    std::size_t i = 0;
    if (t[0] == '[') {
        i = 1;
        std::size_t d = 0;
        while (i < t.size() && is_digit(t[i])) {
            ++i;
            ++d;
        }
        if (d == 0 || i >= t.size() || t[i] != ']') return false;
        *marker_len = i + 1;
        return true;
    }
    std::size_t d = 0;
    while (i < t.size() && is_digit(t[i])) {
        ++i;
        ++d;
    }
    if (d == 0 || d > 4 || i >= t.size() || t[i] != '.') return false;
    // Require text after "12." so years like "2020." do not start entries.
    if (i + 1 < t.size() && t[i + 1] != ' ') return false;
    *marker_len = i + 1;
    return true;
}

std::vector<std::string> split_numbered(
    const std::vector<std::string_view>& lines) {
    std::vector<std::string> entries;
    std::string current;
    std::size_t marker_len = 0;
    for (auto line : lines) {
        if (numbered_marker(line, &marker_len)) {
            if (!trim_view(current).empty()) entries.push_back(current);
            current = std::string(trim_view(line));
            current.push_back('\n');
        } else if (!entries.empty() || !trim_view(current).empty()) {
            current += std::string(line);
            current.push_back('\n');
        }
    }
    if (!trim_view(current).empty()) entries.push_back(current);
    return entries;
}

std::vector<std::string> split_hanging_indent(
    const std::vector<std::string_view>& lines) {
    bool any_indented = false;
    for (auto line : lines) {
        if (trim_view(line).empty()) continue;
        if (line.size() >= 2 && (line.substr(0, 2) == "  " || line[0] == '\t'))
            any_indented = true;
    }
    if (!any_indented) return {};
    std::vector<std::string> entries;
    std::string current;
    for (auto line : lines) {
        if (trim_view(line).empty()) continue;
        bool indented =
            line.size() >= 2 && (line.substr(0, 2) == "  " || line[0] == '\t');
        if (!indented) {
            if (!trim_view(current).empty()) entries.push_back(current);
            current.clear();
        }
        current += std::string(line);
        current.push_back('\n');
    }
    if (!trim_view(current).empty()) entries.push_back(current);
    return entries;
}

std::vector<std::string> split_blank_lines(
    const std::vector<std::string_view>& lines) {
    std::vector<std::string> entries;
    std::string current;
    for (auto line : lines) {
        if (trim_view(line).empty()) {
            if (!trim_view(current).empty()) entries.push_back(current);
            current.clear();
        } else {
            current += std::string(line);
            current.push_back('\n');
        }
    }
    if (!trim_view(current).empty()) entries.push_back(current);
    return entries;
}

std::string_view strip_entry_marker(std::string_view text) {
    auto t = trim_view(text);
    std::size_t marker_len = 0;
    if (numbered_marker(t, &marker_len)) t.remove_prefix(marker_len);
    return trim_view(t);
}

std::string longest_quoted_span(std::string_view text) {
    std::string best;
    // Straight quotes.
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t open = text.find('"', i);
        if (open == std::string_view::npos) break;
        std::size_t close = text.find('"', open + 1);
        if (close == std::string_view::npos) break;
        auto span = trim_view(text.substr(open + 1, close - open - 1));
        if (span.size() > best.size()) best = std::string(span);
        i = close + 1;
    }
    // Curly quotes (UTF-8).
    static const std::string open_q = "\xE2\x80\x9C";
    static const std::string close_q = "\xE2\x80\x9D";
    i = 0;
    while (i < text.size()) {
        std::size_t open = text.find(open_q, i);
        if (open == std::string_view::npos) break;
        std::size_t close = text.find(close_q, open + open_q.size());
        if (close == std::string_view::npos) break;
        auto span = trim_view(
            text.substr(open + open_q.size(), close - open - open_q.size()));
        if (span.size() > best.size()) best = std::string(span);
        i = close + close_q.size();
    }
    return best;
}

// Period classification: "initial" periods terminate single-letter initials
// or the "al" of "et al.", everything else ends a sentence-like segment.
struct PeriodInfo {
    std::size_t pos;
    bool initial;
};

std::vector<PeriodInfo> classify_periods(std::string_view text) {
    std::vector<PeriodInfo> out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '.') continue;
        // Skip decimals ("3.14") and version-like dotted runs.
        if (i + 1 < text.size() && is_digit(text[i + 1])) continue;
        std::size_t start = i;
        while (start > 0) {
            char c = text[start - 1];
            if (std::isalnum(static_cast<unsigned char>(c)) == 0) break;
            --start;
        }
        std::string_view word = text.substr(start, i - start);
        bool initial = (word.size() == 1 && is_upper(word[0])) ||
                       to_lower_ascii(word) == "al";
        out.push_back({i, initial});
    }
    return out;
}

}  // namespace

std::string extract_reference_title(std::string_view entry_text) {
    auto text = strip_entry_marker(entry_text);
    if (text.empty()) return {};

    auto quoted = longest_quoted_span(text);
    if (!quoted.empty()) return quoted;

    auto periods = classify_periods(text);
    std::size_t first_real = std::string_view::npos;
    std::size_t author_end = std::string_view::npos;
    for (const auto& p : periods) {
        if (p.initial) {
            if (first_real == std::string_view::npos) author_end = p.pos;
        } else {
            first_real = p.pos;
            break;
        }
    }
    if (first_real == std::string_view::npos) return {};

    std::string_view span;
    if (author_end != std::string_view::npos) {
        span = text.substr(author_end + 1, first_real - author_end - 1);
    } else {
        // No initials: the first period ends the author list instead.
        std::size_t second_real = std::string_view::npos;
        for (const auto& p : periods) {
            if (!p.initial && p.pos > first_real) {
                second_real = p.pos;
                break;
            }
        }
        if (second_real == std::string_view::npos) {
            span = text.substr(first_real + 1);
        } else {
            span = text.substr(first_real + 1, second_real - first_real - 1);
        }
    }
    auto title = trim_view(span);
    while (!title.empty() && (title.front() == ',' || title.front() == ';' ||
                              title.front() == ':')) {
        title.remove_prefix(1);
        title = trim_view(title);
    }
    return std::string(title);
}

void ParseConfig::validate() const {
    if (max_section_words <= min_section_words)
        throw ConfigError("max_section_words must exceed min_section_words");
}

SurveyDocument parse_markdown(std::string_view markdown, const std::string& id,
                              const std::string& topic, Discipline discipline,
                              const ParseConfig& cfg, DiagnosticSink* diag) {
    SurveyDocument doc;
    doc.id = id;
    doc.topic = topic;
    doc.discipline = discipline;

    auto sections = scan_sections(markdown, topic);

    // The references section is represented by doc.references, not content.
    // It runs until the next heading (of any level).
    for (std::size_t i = 0; i < sections.size(); ++i) {
        if (is_reference_heading(sections[i].title,
                                 cfg.reference_heading_names)) {
            sections.erase(sections.begin() + static_cast<std::ptrdiff_t>(i));
            --i;
        }
    }

    for (auto& section : sections) {
        ContentEntry entry;
        entry.heading = trim(clean_whitespace(section.title));
        if (entry.heading.empty()) entry.heading = "Untitled";
        entry.figure_count = static_cast<int>(md::count_images(section.body));
        entry.table_count =
            static_cast<int>(md::count_table_blocks(section.body));
        entry.equation_count =
            static_cast<int>(md::count_display_equations(section.body));
        entry.body = clean_whitespace(md::strip_markup(section.body));

        std::size_t body_words = count_words(entry.body);
        if (body_words > cfg.max_section_words ||
            body_words < cfg.min_section_words) {
            if (diag)
                diag->warn("section_length",
                           "dropped section '" + entry.heading + "' with " +
                               std::to_string(body_words) + " words");
            continue;
        }

        int level = std::max(1, section.level);
        doc.outline.push_back({level, entry.heading});
        doc.content.push_back(std::move(entry));
    }

    return doc;
}

std::vector<ReferenceEntry> extract_references(std::string_view markdown,
                                               const ParseConfig& cfg,
                                               DiagnosticSink* diag) {
    auto loc = md::find_references_section(markdown, cfg.reference_heading_names);
    if (!loc.found) {
        if (diag) diag->info("no_references_heading", "no references section");
        return {};
    }
    std::string_view body = markdown.substr(loc.body_offset);

    // The section ends at the next heading.
    bool in_fence = false;
    std::size_t offset = 0;
    std::size_t end = body.size();
    auto body_lines = split_lines(body);
    std::string_view prev_line;
    std::size_t prev_offset = 0;
    for (auto line : body_lines) {
        if (md::is_fence_marker(line)) in_fence = !in_fence;
        if (!in_fence) {
            if (md::match_atx_heading(line)) {
                end = offset;
                break;
            }
            if (md::match_setext_underline(line) &&
                !trim_view(prev_line).empty() && offset > 0 &&
                !md::is_table_separator(line)) {
                end = prev_offset;
                break;
            }
        }
        prev_line = line;
        prev_offset = offset;
        offset += line.size() + 1;
    }
    body = body.substr(0, end);
    auto lines = split_lines(body);

    auto numbered = split_numbered(lines);
    std::vector<std::string> raw_entries;
    if (numbered.size() >= 2) {
        raw_entries = std::move(numbered);
    } else {
        auto hanging = split_hanging_indent(lines);
        if (hanging.size() >= 2) {
            raw_entries = std::move(hanging);
        } else {
            raw_entries = split_blank_lines(lines);
        }
    }

    std::vector<ReferenceEntry> entries;
    entries.reserve(raw_entries.size());
    for (auto& raw : raw_entries) {
        ReferenceEntry entry;
        entry.raw_text = trim(clean_whitespace(raw));
        if (entry.raw_text.empty()) continue;
        entry.title = extract_reference_title(entry.raw_text);
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<ReferenceEntry> refine_reference_titles(
    const std::vector<ReferenceEntry>& entries, LlmClient& client,
    DiagnosticSink* diag) {
    std::vector<ReferenceEntry> out = entries;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& entry = out[i];
        if (!entry.title.empty() && count_words(entry.title) >= 3) continue;
        try {
            auto messages = prompts::render_refine_title(entry.raw_text);
            auto result = client.complete(messages, "refine:" + std::to_string(i));
            auto payload = extract_json_payload(result.content);
            if (payload.empty())
                throw SchemaError("no JSON object in title response");
            auto j = nlohmann::json::parse(payload);
            auto title = trim(j.at("title").get<std::string>());
            if (title.empty()) throw SchemaError("empty refined title");
            entry.title = title;
        } catch (const std::exception& e) {
            if (diag)
                diag->warn("title_refinement_failed",
                           "entry " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

SurveyDocument parse_survey(std::string_view markdown, const std::string& id,
                            const std::string& topic, Discipline discipline,
                            const ParseConfig& cfg, LlmClient* client,
                            DiagnosticSink* diag) {
    auto doc = parse_markdown(markdown, id, topic, discipline, cfg, diag);
    doc.references = extract_references(markdown, cfg, diag);
    if (cfg.refine_titles && client != nullptr && !doc.references.empty())
        doc.references = refine_reference_titles(doc.references, *client, diag);
    return doc;
}

}  // namespace surveyscope
