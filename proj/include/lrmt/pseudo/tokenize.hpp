#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lrmt::pseudo {

enum class TokenKind { Word, Other };

/// A token with its byte span [begin, end) in the source string.
struct Token {
    std::string text;
    TokenKind kind = TokenKind::Other;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Words are maximal runs of letters (text::is_letter); each maximal run of
/// non-letters is one Other token. Spans tile the source exactly.
struct TokenizedSentence {
    std::vector<Token> tokens;
};

TokenizedSentence tokenize(std::string_view sentence);

/// Concatenates token texts. For an unmodified tokenization this returns
/// the original sentence byte-for-byte.
std::string detokenize(const TokenizedSentence& sentence);

} // namespace lrmt::pseudo
