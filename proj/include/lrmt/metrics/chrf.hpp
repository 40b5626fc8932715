#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "lrmt/metrics/score_report.hpp"

namespace lrmt::metrics {

struct ChrfConfig {
    int char_order = 6;
    int word_order = 2;
    double beta = 2.0;
    bool whitespace = false;  // include whitespace in character n-grams
    /// false: average P and R over orders where both sides have n-grams,
    /// then one F-beta (the reference scorer's default). true: arithmetic
    /// mean of per-order F-beta with 1e-16 stand-ins for undefined ratios.
    bool eps_smoothing = false;
    bool lowercase = false;

    void validate() const;
    int order() const { return char_order + word_order; }
    std::string signature() const;
};

/// Per order: {hyp n-grams, ref n-grams, clipped matches}. Character orders
/// first, then word orders.
struct ChrfStats {
    std::vector<std::array<std::size_t, 3>> orders;
    std::size_t hyp_chars = 0;
    std::size_t ref_chars = 0;

    ChrfStats& operator+=(const ChrfStats& other);
};

/// Words for chrF++ word n-grams: whitespace split, then one leading or
/// trailing ASCII punctuation character is split off each multi-char word.
std::vector<std::string> chrf_words(const std::string& sentence);

ChrfStats chrf_sentence_stats(const std::string& hypothesis, const std::string& reference,
                              const ChrfConfig& config);

ScoreReport chrf_from_stats(const ChrfStats& stats, const ChrfConfig& config);

ScoreReport chrf_pp(const std::vector<std::string>& hypotheses, const std::vector<std::string>& references,
                    const ChrfConfig& config = {});

} // namespace lrmt::metrics
