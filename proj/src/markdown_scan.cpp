#include "markdown_scan.hpp"

#include <algorithm>
#include <cctype>

#include "surveyscope/text_util.hpp"

namespace surveyscope::md {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_digit(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

bool is_alpha(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

std::string normalize_heading_name(std::string_view title) {
    auto t = trim_view(title);
    while (!t.empty() && (t.back() == ':' || t.back() == '.')) {
        t.remove_suffix(1);
        t = trim_view(t);
    }
    return to_lower_ascii(t);
}

// Display-math spans: $$...$$ and \[...\]. Returns [begin, end) byte ranges.
std::vector<std::pair<std::size_t, std::size_t>> math_spans(
    std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t i = 0;
    while (i + 1 < text.size()) {
        if (text[i] == '$' && text[i + 1] == '$') {
            std::size_t close = text.find("$$", i + 2);
            if (close == std::string_view::npos) break;
            spans.emplace_back(i, close + 2);
            i = close + 2;
        } else if (text[i] == '\\' && text[i + 1] == '[') {
            std::size_t close = text.find("\\]", i + 2);
            if (close == std::string_view::npos) {
                i += 2;
                continue;
            }
            spans.emplace_back(i, close + 2);
            i = close + 2;
        } else {
            ++i;
        }
    }
    return spans;
}

}  // namespace

std::optional<Heading> match_atx_heading(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && i < 3 && line[i] == ' ') ++i;
    std::size_t hashes = 0;
    while (i < line.size() && line[i] == '#') {
        ++hashes;
        ++i;
    }
    if (hashes == 0 || hashes > 6) return std::nullopt;
    if (i < line.size() && line[i] != ' ' && line[i] != '\t') return std::nullopt;
    std::string_view rest = line.substr(i);
    // Trailing closing hashes are decoration.
    auto t = trim_view(rest);
    while (!t.empty() && t.back() == '#') t.remove_suffix(1);
    t = trim_view(t);
    if (t.empty()) return std::nullopt;
    return Heading{static_cast<int>(hashes), std::string(t)};
}

std::optional<int> match_setext_underline(std::string_view line) {
    auto t = trim_view(line);
    if (t.empty()) return std::nullopt;
    if (std::all_of(t.begin(), t.end(), [](char c) { return c == '='; }))
        return 1;
    if (t.size() >= 2 &&
        std::all_of(t.begin(), t.end(), [](char c) { return c == '-'; }))
        return 2;
    return std::nullopt;
}

bool is_fence_marker(std::string_view line) {
    auto t = trim_view(line);
    return t.substr(0, 3) == "```" || t.substr(0, 3) == "~~~";
}

bool is_table_separator(std::string_view line) {
    auto t = trim_view(line);
    if (t.find('-') == std::string_view::npos) return false;
    bool has_pipe = false;
    for (char c : t) {
        if (c == '|') {
            has_pipe = true;
        } else if (c != '-' && c != ':' && c != ' ') {
            return false;
        }
    }
    return has_pipe;
}

const std::vector<std::string>& default_reference_heading_names() {
    static const std::vector<std::string> names{"References", "Bibliography",
                                                "Works Cited"};
    return names;
}

ReferencesLocation find_references_section(
    std::string_view markdown, const std::vector<std::string>& names) {
    std::vector<std::string> wanted;
    wanted.reserve(names.size());
    for (const auto& n : names) wanted.push_back(normalize_heading_name(n));

    ReferencesLocation loc;
    bool in_fence = false;
    std::size_t offset = 0;
    std::string_view prev_line;
    std::size_t prev_offset = 0;
    for (auto line : split_lines(markdown)) {
        std::size_t next_offset = offset + line.size() + 1;
        if (is_fence_marker(line)) {
            in_fence = !in_fence;
        } else if (!in_fence) {
            if (auto h = match_atx_heading(line)) {
                auto norm = normalize_heading_name(h->title);
                if (std::find(wanted.begin(), wanted.end(), norm) !=
                    wanted.end()) {
                    loc = {std::min(next_offset, markdown.size()), offset,
                           h->level, true};
                }
            } else if (auto lvl = match_setext_underline(line)) {
                auto prev = trim_view(prev_line);
                if (!prev.empty() && !match_atx_heading(prev_line)) {
                    auto norm = normalize_heading_name(prev);
                    if (std::find(wanted.begin(), wanted.end(), norm) !=
                        wanted.end()) {
                        loc = {std::min(next_offset, markdown.size()),
                               prev_offset, *lvl, true};
                    }
                }
            }
        }
        prev_line = line;
        prev_offset = offset;
        offset = next_offset;
    }
    return loc;
}

std::string strip_markup(std::string_view markdown) {
    // Remove display math first (spans may cross lines).
    std::string no_math;
    no_math.reserve(markdown.size());
    auto spans = math_spans(markdown);
    std::size_t cursor = 0;
    for (auto [begin, end] : spans) {
        no_math += std::string(markdown.substr(cursor, begin - cursor));
        no_math += " ";
        cursor = end;
    }
    no_math += std::string(markdown.substr(cursor));

    std::string out;
    out.reserve(no_math.size());
    auto lines = split_lines(no_math);
    bool in_fence = false;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (is_fence_marker(line)) {
            in_fence = !in_fence;
            out.push_back('\n');
            continue;
        }
        if (!in_fence) {
            // Table block: header row followed by a separator row.
            if (line.find('|') != std::string_view::npos &&
                li + 1 < lines.size() && is_table_separator(lines[li + 1])) {
                while (li < lines.size() &&
                       lines[li].find('|') != std::string_view::npos)
                    ++li;
                --li;
                out.push_back('\n');
                continue;
            }
            if (match_setext_underline(line) && li > 0 &&
                !trim_view(lines[li - 1]).empty()) {
                out.push_back('\n');
                continue;
            }
        }

        std::string cleaned;
        cleaned.reserve(line.size());
        std::string_view body = line;
        if (!in_fence) {
            if (auto h = match_atx_heading(line)) {
                cleaned = h->title;
                out += cleaned;
                out.push_back('\n');
                continue;
            }
            // List bullets and blockquote markers.
            auto t = trim_view(body);
            if (!t.empty() && (t[0] == '>' )) t.remove_prefix(1);
            t = trim_view(t);
            if (t.size() >= 2 && (t[0] == '-' || t[0] == '*' || t[0] == '+') &&
                t[1] == ' ') {
                t.remove_prefix(2);
            } else {
                std::size_t d = 0;
                while (d < t.size() && is_digit(t[d])) ++d;
                if (d > 0 && d < t.size() && (t[d] == '.' || t[d] == ')') &&
                    d + 1 < t.size() && t[d + 1] == ' ')
                    t.remove_prefix(d + 2);
            }
            body = t;
        }
        // Inline pass: drop image directives, reduce links to their text.
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (!in_fence && body[i] == '!' && i + 1 < body.size() &&
                body[i + 1] == '[') {
                std::size_t close = body.find(']', i + 2);
                if (close != std::string_view::npos && close + 1 < body.size() &&
                    body[close + 1] == '(') {
                    std::size_t paren = body.find(')', close + 2);
                    if (paren != std::string_view::npos) {
                        i = paren;
                        continue;
                    }
                }
            }
            if (!in_fence && body[i] == '[') {
                std::size_t close = body.find(']', i + 1);
                if (close != std::string_view::npos && close + 1 < body.size() &&
                    body[close + 1] == '(') {
                    std::size_t paren = body.find(')', close + 2);
                    if (paren != std::string_view::npos) {
                        cleaned += std::string(body.substr(i + 1, close - i - 1));
                        i = paren;
                        continue;
                    }
                }
            }
            cleaned.push_back(body[i]);
        }
        out += cleaned;
        out.push_back('\n');
    }
    return out;
}

long count_images(std::string_view markdown) {
    long count = 0;
    std::size_t i = 0;
    while (i + 1 < markdown.size()) {
        if (markdown[i] == '!' && markdown[i + 1] == '[') {
            std::size_t close = markdown.find(']', i + 2);
            if (close != std::string_view::npos &&
                close + 1 < markdown.size() && markdown[close + 1] == '(' &&
                markdown.find(')', close + 2) != std::string_view::npos) {
                ++count;
                i = close + 2;
                continue;
            }
        }
        ++i;
    }
    return count;
}

long count_display_equations(std::string_view markdown) {
    return static_cast<long>(math_spans(markdown).size());
}

long count_table_blocks(std::string_view markdown) {
    long count = 0;
    auto lines = split_lines(markdown);
    bool in_fence = false;
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        if (is_fence_marker(lines[i])) {
            in_fence = !in_fence;
            continue;
        }
        if (in_fence) continue;
        if (lines[i].find('|') != std::string_view::npos &&
            is_table_separator(lines[i + 1]) &&
            lines[i + 1].find('|') != std::string_view::npos) {
            ++count;
            while (i < lines.size() &&
                   lines[i].find('|') != std::string_view::npos)
                ++i;
            --i;
        }
    }
    return count;
}

long count_citation_markers(std::string_view text) {
    long count = 0;
    // Bracketed numeric markers.
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '[') continue;
        std::size_t j = i + 1;
        bool any_digit = false;
        bool valid = true;
        bool expecting_digit = true;
        while (j < text.size() && text[j] != ']') {
            char c = text[j];
            if (is_digit(c)) {
                any_digit = true;
                expecting_digit = false;
                ++j;
            } else if (!expecting_digit &&
                       (c == ',' || c == ';' || c == '-' || c == ' ')) {
                expecting_digit = (c != ' ');
                ++j;
            } else if (!expecting_digit && static_cast<unsigned char>(c) == 0xE2 &&
                       j + 2 < text.size() &&
                       static_cast<unsigned char>(text[j + 1]) == 0x80 &&
                       static_cast<unsigned char>(text[j + 2]) == 0x93) {
                // en dash range
                expecting_digit = true;
                j += 3;
            } else {
                valid = false;
                break;
            }
        }
        if (valid && any_digit && j < text.size() && text[j] == ']') {
            ++count;
            i = j;
        }
    }
    // Author-year parentheticals: starts with a letter, contains a
    // plausible four-digit year.
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '(') continue;
        std::size_t close = text.find(')', i + 1);
        if (close == std::string_view::npos) continue;
        std::string_view inner = text.substr(i + 1, close - i - 1);
        auto t = trim_view(inner);
        if (t.empty() || !is_alpha(t[0])) {
            i = close;
            continue;
        }
        bool has_year = false;
        for (std::size_t k = 0; k + 3 < t.size(); ++k) {
            if ((t[k] == '1' && t[k + 1] == '9') ||
                (t[k] == '2' && t[k + 1] == '0')) {
                if (is_digit(t[k + 2]) && is_digit(t[k + 3]) &&
                    (k == 0 || !is_digit(t[k - 1])) &&
                    (k + 4 >= t.size() || !is_digit(t[k + 4]))) {
                    has_year = true;
                    break;
                }
            }
        }
        if (has_year) ++count;
        i = close;
    }
    return count;
}

long count_sentences(std::string_view text) {
    long count = 0;
    bool have_content = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (is_space(c)) continue;
        have_content = true;
        if ((c == '.' || c == '!' || c == '?') &&
            (i + 1 >= text.size() || is_space(text[i + 1]))) {
            ++count;
            have_content = false;
        }
    }
    (void)have_content;
    return count;
}

long count_blocks(std::string_view text) {
    long count = 0;
    bool block_has_text = false;
    bool at_line_start = true;
    bool line_blank = true;
    for (char c : text) {
        if (c == '\n') {
            if (line_blank && block_has_text) {
                ++count;
                block_has_text = false;
            }
            at_line_start = true;
            line_blank = true;
            continue;
        }
        if (!is_space(c)) {
            line_blank = false;
            block_has_text = true;
        }
        at_line_start = false;
    }
    (void)at_line_start;
    if (block_has_text) ++count;
    return count;
}

}  // namespace surveyscope::md
