#include "lrmt/pseudo/eifeler.hpp"

#include "lrmt/error.hpp"
#include "lrmt/pseudo/tokenize.hpp"
#include "lrmt/text/utf8.hpp"

namespace lrmt::pseudo {

EifelerRuleConfig EifelerRuleConfig::standard() {
    EifelerRuleConfig c;
    c.vowels = {U'a', U'e', U'i', U'o', U'u', U'ä', U'ë', U'é', U'ö', U'ü', U'â', U'ê', U'î', U'ô', U'û'};
    c.retain_before = c.vowels;
    c.retain_before.insert({U'n', U'd', U't', U'z', U'h'});
    c.pause_marks = {U'.', U'!', U'?', U'…'};
    return c;
}

void EifelerRuleConfig::validate() const {
    for (char32_t v : vowels)
        if (!retain_before.contains(text::to_lower(v)) && !retain_before.contains(v))
            throw ConfigError("Eifeler config: retain_before must contain every vowel");
}

namespace {

// Length (in scalar values) of the n/nn ending to drop, or 0. A longer run
// of n's is not an n/nn ending, and dropping two of three would leave a word
// the rule applies to again.
std::size_t droppable_ending(const std::u32string& word) {
    std::size_t k = 0;
    while (k < word.size() && text::to_lower(word[word.size() - 1 - k]) == U'n')
        ++k;
    // Never delete a whole word.
    return k <= 2 && k < word.size() ? k : 0;
}

} // namespace

std::string apply_eifeler(std::string_view sentence, const EifelerRuleConfig& config) {
    auto ts = tokenize(sentence);
    auto& toks = ts.tokens;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind != TokenKind::Word)
            continue;
        auto word = text::decode(toks[i].text);
        const auto ending = droppable_ending(word);
        if (ending == 0)
            continue;
        if (config.exceptions.contains(text::casefold(toks[i].text)))
            continue;

        bool pause = false;
        std::size_t next = i + 1;
        for (; next < toks.size() && toks[next].kind != TokenKind::Word; ++next)
            for (char32_t cp : text::decode(toks[next].text))
                if (config.pause_marks.contains(cp))
                    pause = true;
        const bool at_end = next >= toks.size();

        bool keep;
        if ((at_end || pause) && config.retain_at_pause) {
            keep = true;
        } else if (at_end) {
            keep = false;
        } else {
            // Tokens past i are never rewritten before being read here: only
            // word endings change, never a word's first character.
            const auto first = text::decode(toks[next].text).front();
            keep = config.retain_before.contains(text::to_lower(first));
        }
        if (!keep) {
            word.resize(word.size() - ending);
            toks[i].text = text::encode(word);
        }
    }
    return detokenize(ts);
}

} // namespace lrmt::pseudo
