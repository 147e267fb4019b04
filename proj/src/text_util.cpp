#include "surveyscope/text_util.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace surveyscope {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

std::string_view trim_view(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return text.substr(begin, end - begin);
}

std::string trim(std::string_view text) {
    return std::string(trim_view(text));
}

std::vector<std::string_view> split_tokens(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

std::size_t count_words(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string_view line = text.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.push_back(line);
            start = i + 1;
        }
    }
    return lines;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t hash = seed;
    for (unsigned char byte : data) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string stable_hash_hex(std::string_view data) {
    std::uint64_t a = fnv1a64(data);
    std::uint64_t b = fnv1a64(data, 0x9ae16a3b2f90404fULL);
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                  static_cast<unsigned long long>(a),
                  static_cast<unsigned long long>(b));
    return std::string(buf);
}

std::string clean_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    int blank_lines = 0;
    std::string line_buf;
    auto flush_line = [&] {
        while (!line_buf.empty() && line_buf.back() == ' ') line_buf.pop_back();
        if (line_buf.empty()) {
            ++blank_lines;
        } else {
            if (!out.empty()) {
                out.push_back('\n');
                if (blank_lines > 0) out.push_back('\n');
            }
            blank_lines = 0;
            out += line_buf;
        }
        line_buf.clear();
    };
    bool pending_space = false;
    for (char c : text) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (c == '\n') {
            flush_line();
            pending_space = false;
        } else if (c == '\t' || c == ' ' || c == '\r' ||
                   (uc < 0x20 && c != '\n') || uc == 0x7f) {
            pending_space = true;
        } else {
            if (pending_space && !line_buf.empty()) line_buf.push_back(' ');
            pending_space = false;
            line_buf.push_back(c);
        }
    }
    flush_line();
    return out;
}

bool contains_whole_word(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return false;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
        bool left_ok = pos == 0 || !is_alnum(haystack[pos - 1]);
        std::size_t after = pos + needle.size();
        bool right_ok = after >= haystack.size() || !is_alnum(haystack[after]);
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

std::string head_tail_trim(std::string_view text, std::size_t max_words,
                           double head_fraction) {
    auto tokens = split_tokens(text);
    if (tokens.size() <= max_words || max_words == 0) return trim(text);
    std::size_t head = static_cast<std::size_t>(
        static_cast<double>(max_words) * head_fraction);
    if (head == 0) head = 1;
    if (head >= max_words) head = max_words - 1;
    std::size_t tail = max_words - head;
    std::string out;
    for (std::size_t i = 0; i < head; ++i) {
        if (i) out.push_back(' ');
        out += std::string(tokens[i]);
    }
    out += " ... ";
    for (std::size_t i = tokens.size() - tail; i < tokens.size(); ++i) {
        out += std::string(tokens[i]);
        if (i + 1 < tokens.size()) out.push_back(' ');
    }
    return out;
}

std::string extract_json_payload(std::string_view text) {
    // Drop markdown fences first so the bracket scan sees only the body.
    std::string stripped;
    stripped.reserve(text.size());
    for (auto line : split_lines(text)) {
        auto t = trim_view(line);
        if (t.substr(0, 3) == "```" || t.substr(0, 3) == "~~~") continue;
        stripped += std::string(line);
        stripped.push_back('\n');
    }
    std::size_t start = stripped.find_first_of("{[");
    if (start == std::string::npos) return {};
    char open = stripped[start];
    char close = open == '{' ? '}' : ']';
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < stripped.size(); ++i) {
        char c = stripped[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == open) {
            ++depth;
        } else if (c == close) {
            --depth;
            if (depth == 0) return stripped.substr(start, i - start + 1);
        }
    }
    return {};
}

std::string format_double(double value) {
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

}  // namespace surveyscope
