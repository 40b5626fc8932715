#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "lrmt/error.hpp"

namespace lrmt::metrics {

template <typename T>
using NgramCounts = std::map<std::vector<T>, std::size_t>;

/// Counts contiguous n-grams of exactly `order` tokens. The total count is
/// max(0, len - order + 1).
template <typename T>
NgramCounts<T> ngram_counts(std::span<const T> tokens, std::size_t order) {
    if (order == 0)
        throw Error("n-gram order must be >= 1");
    NgramCounts<T> counts;
    if (tokens.size() < order)
        return counts;
    for (std::size_t i = 0; i + order <= tokens.size(); ++i)
        ++counts[std::vector<T>(tokens.begin() + i, tokens.begin() + i + order)];
    return counts;
}

template <typename T>
std::size_t total_count(const NgramCounts<T>& counts) {
    std::size_t n = 0;
    for (const auto& [_, c] : counts)
        n += c;
    return n;
}

/// Sum over hypothesis n-grams of min(hyp count, ref count).
template <typename T>
std::size_t clipped_matches(const NgramCounts<T>& hyp, const NgramCounts<T>& ref) {
    std::size_t n = 0;
    for (const auto& [gram, c] : hyp)
        if (auto it = ref.find(gram); it != ref.end())
            n += std::min(c, it->second);
    return n;
}

} // namespace lrmt::metrics
