#include "lrmt/pseudo/pseudo.hpp"

#include "lrmt/pseudo/tokenize.hpp"
#include "lrmt/text/utf8.hpp"

namespace lrmt::pseudo {

std::string substitute_tokens(std::string_view sentence, const BilingualDictionary& dict) {
    if (dict.empty())
        return std::string(sentence);
    auto ts = tokenize(sentence);
    for (auto& tok : ts.tokens) {
        if (tok.kind != TokenKind::Word)
            continue;
        const auto hit = dict.lookup(tok.text);
        if (!hit)
            continue;
        auto repl = text::decode(*hit);
        const bool upper = text::is_upper(text::decode(tok.text).front());
        repl.front() = upper ? text::to_upper(repl.front()) : text::to_lower(repl.front());
        tok.text = text::encode(repl);
    }
    return detokenize(ts);
}

PseudoResult pseudo_translate(const corpus::Corpus& records, const BilingualDictionary& dict,
                              const EifelerRuleConfig& config) {
    config.validate();
    PseudoResult result;
    result.records.reserve(records.size());
    for (const auto& rec : records) {
        if (!rec.hrl) {
            ++result.dropped_missing_hrl;
            continue;
        }
        auto out = rec;
        out.lrl = apply_eifeler(substitute_tokens(*rec.hrl, dict), config);
        if (out.lrl->empty())
            out.lrl.reset();
        result.records.push_back(std::move(out));
    }
    return result;
}

} // namespace lrmt::pseudo
