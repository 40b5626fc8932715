#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lrmt/metrics/score_report.hpp"

namespace lrmt::metrics {

enum class Smoothing { None, Floor, AddK, Exp };

Smoothing parse_smoothing(const std::string& name);
const char* smoothing_name(Smoothing s);

struct BleuConfig {
    int max_order = 4;
    /// Per-order weights; empty means uniform 1/N (the reference scorer's
    /// only mode, computed exactly as it does).
    std::vector<double> weights;
    Smoothing smoothing = Smoothing::Exp;
    /// Floor / add-k constant; negative selects the method default
    /// (0.1 for floor, 1 for add-k).
    double smooth_value = -1.0;
    std::string tokenizer = "13a";  // "13a" or "none"
    bool effective_order = false;
    bool lowercase = false;

    void validate() const;
    std::string signature() const;
};

/// Sufficient statistics; summing them over sentences gives corpus statistics.
struct BleuStats {
    std::vector<std::size_t> matches;
    std::vector<std::size_t> totals;
    std::size_t hyp_len = 0;
    std::size_t ref_len = 0;

    BleuStats& operator+=(const BleuStats& other);
};

std::vector<std::string> bleu_tokenize(const std::string& sentence, const BleuConfig& config);

BleuStats bleu_sentence_stats(const std::string& hypothesis, const std::string& reference,
                              const BleuConfig& config);

ScoreReport bleu_from_stats(const BleuStats& stats, const BleuConfig& config);

/// Corpus BLEU with one reference per hypothesis. Throws lrmt::Error on a
/// length mismatch or empty input.
ScoreReport bleu(const std::vector<std::string>& hypotheses, const std::vector<std::string>& references,
                 const BleuConfig& config = {});

} // namespace lrmt::metrics
