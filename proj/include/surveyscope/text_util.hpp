#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace surveyscope {

std::string to_lower_ascii(std::string_view text);
std::string_view trim_view(std::string_view text);
std::string trim(std::string_view text);

/// Whitespace-separated tokens.
std::vector<std::string_view> split_tokens(std::string_view text);
std::size_t count_words(std::string_view text);

std::vector<std::string_view> split_lines(std::string_view text);

/// FNV-1a 64-bit over bytes, parameterized by seed.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// 32-hex-character content key from two independent FNV passes.
std::string stable_hash_hex(std::string_view data);

/// Normalizes control characters to spaces (keeping newlines), collapses
/// space/tab runs, strips trailing spaces, and caps blank-line runs at one.
std::string clean_whitespace(std::string_view text);

/// True when `needle` occurs in `haystack` with non-alphanumeric characters
/// (or string edges) on both sides. Case-sensitive; lowercase both for the
/// usual use.
bool contains_whole_word(std::string_view haystack, std::string_view needle);

/// Keeps the head and tail of a long text, replacing the middle with an
/// ellipsis marker, so that at most `max_words` words survive.
std::string head_tail_trim(std::string_view text, std::size_t max_words,
                           double head_fraction = 0.6);

/// Extracts the first JSON value from free-form model output: strips
/// markdown code fences and leading/trailing prose around the outermost
/// brace/bracket pair. Returns the empty string when nothing parseable
/// is found.
std::string extract_json_payload(std::string_view text);

/// Shortest round-trip decimal formatting for doubles (deterministic).
std::string format_double(double value);

}  // namespace surveyscope
