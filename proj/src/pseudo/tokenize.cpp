#include "lrmt/pseudo/tokenize.hpp"

#include "lrmt/text/utf8.hpp"

namespace lrmt::pseudo {

TokenizedSentence tokenize(std::string_view sentence) {
    TokenizedSentence out;
    const auto cps = text::decode(sentence);
    std::size_t byte = 0;
    std::size_t i = 0;
    while (i < cps.size()) {
        const bool word = text::is_letter(cps[i]);
        Token tok;
        tok.kind = word ? TokenKind::Word : TokenKind::Other;
        tok.begin = byte;
        while (i < cps.size() && text::is_letter(cps[i]) == word) {
            text::append_utf8(tok.text, cps[i]);
            ++i;
        }
        byte += tok.text.size();
        tok.end = byte;
        out.tokens.push_back(std::move(tok));
    }
    return out;
}

std::string detokenize(const TokenizedSentence& sentence) {
    std::string out;
    for (const auto& tok : sentence.tokens)
        out += tok.text;
    return out;
}

} // namespace lrmt::pseudo
