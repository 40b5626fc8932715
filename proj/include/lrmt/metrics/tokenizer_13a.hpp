#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lrmt::metrics {

/// mteval-v13a tokenization as implemented by the standard BLEU scorer:
/// entity unescaping, splitting of most ASCII punctuation, period/comma
/// splitting except inside numbers, dash splitting after digits.
std::vector<std::string> tokenize_13a(std::string_view line);

/// Split on Unicode whitespace (the set of Python's str.split()).
std::vector<std::string> split_whitespace(std::string_view line);

} // namespace lrmt::metrics
