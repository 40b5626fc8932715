#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace lrmt::metrics {

/// Corpus-level score. For BLEU `precisions` holds the smoothed n-gram
/// precisions (fractions, not percent) and lengths are token counts; for
/// chrF++ `precisions`/`recalls` are per order (character orders first,
/// then word orders) and lengths are character counts.
struct ScoreReport {
    std::string metric;
    double score = 0.0;
    std::vector<double> precisions;
    std::vector<double> recalls;
    double brevity_penalty = 1.0;
    std::size_t hyp_len = 0;
    std::size_t ref_len = 0;
    std::string signature;
};

nlohmann::ordered_json to_json(const ScoreReport& report);

} // namespace lrmt::metrics
