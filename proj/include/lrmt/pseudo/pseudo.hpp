#pragma once

#include <string>
#include <string_view>

#include "lrmt/corpus/corpus.hpp"
#include "lrmt/pseudo/dictionary.hpp"
#include "lrmt/pseudo/eifeler.hpp"

namespace lrmt::pseudo {

/// Replaces every word whose case-folded form is a dictionary key. The
/// replacement's first letter takes the case of the source word's first
/// letter; everything between words is copied verbatim.
std::string substitute_tokens(std::string_view sentence, const BilingualDictionary& dict);

struct PseudoResult {
    corpus::Corpus records;
    std::size_t dropped_missing_hrl = 0;
};

/// lrl = apply_eifeler(substitute_tokens(hrl)); id, hrl and en are copied.
PseudoResult pseudo_translate(const corpus::Corpus& records, const BilingualDictionary& dict,
                              const EifelerRuleConfig& config);

} // namespace lrmt::pseudo
