#pragma once

#include <string>
#include <string_view>

namespace lrmt::text {

/// Decodes UTF-8 into Unicode scalar values. Throws lrmt::Error on
/// malformed input (overlong forms, surrogates, truncated sequences).
std::u32string decode(std::string_view utf8);

void append_utf8(std::string& out, char32_t cp);
std::string encode(std::u32string_view text);

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t scalar_count(std::string_view utf8);

/// Letters: ASCII, Latin-1 Supplement, Latin Extended-A/B and Additional,
/// Greek and Cyrillic. Digits, marks outside those blocks, punctuation and
/// symbols are not letters.
bool is_letter(char32_t cp);

/// Simple one-to-one case mappings over the same blocks as is_letter.
char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);
bool is_upper(char32_t cp);

std::string casefold(std::string_view utf8);

/// Whitespace as understood by Python's str.split(); the reference metric
/// implementations split on exactly this set.
bool is_split_space(char32_t cp);

} // namespace lrmt::text
