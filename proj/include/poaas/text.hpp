#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace poaas::text {

// Decodes UTF-8 into Unicode scalar values. Invalid byte sequences decode to
// U+FFFD, one replacement per offending byte, so the mapping is total and
// deterministic for arbitrary input.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(const std::u32string& s);

// Length of s in Unicode scalar values.
std::size_t char_count(std::string_view s);

bool is_ascii_alpha(char32_t c);
bool is_ascii_digit(char32_t c);
bool is_ascii_upper(char32_t c);
bool is_ascii_lower(char32_t c);

// True for ASCII punctuation plus the common typographic marks we see in
// prompts (curly quotes, dashes, ellipsis).
bool is_punct(char32_t c);

std::string ascii_lower(std::string_view s);

std::string trim(std::string_view s);

// Whitespace-split tokens; runs of whitespace never produce empty tokens.
std::vector<std::string> split_ws(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Trim, collapse whitespace runs to single spaces, lowercase ASCII letters.
// This is the shared normalization for all drift similarity components.
std::string normalize_ws_lower(std::string_view s);

// Strips punctuation from both ends of a token ("(France)." -> "France").
std::string strip_surrounding_punct(std::string_view token);

// Lowercased, punctuation-stripped form used for token-level comparisons.
std::string normalize_token(std::string_view token);

std::size_t levenshtein(std::string_view a, std::string_view b);

bool starts_with_ci(std::string_view s, std::string_view prefix);

// Whitespace token count; the default "whitespace" token counter.
std::size_t whitespace_token_count(std::string_view s);

// Integer or decimal literal with an optional sign ("42", "-3.14").
bool is_number_literal(std::string_view token);

// FNV-1a 64-bit over raw bytes, hex encoded. Used for data-file digests and
// the configuration hash.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace poaas::text
