#include "lrmt/metrics/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "lrmt/error.hpp"
#include "lrmt/metrics/ngram.hpp"
#include "lrmt/metrics/tokenizer_13a.hpp"
#include "lrmt/text/utf8.hpp"

namespace lrmt::metrics {

namespace {

// log used by the reference scorer: log(0) is a large finite negative.
double scorer_log(double x) {
    return x == 0.0 ? -9999999999.0 : std::log(x);
}

} // namespace

Smoothing parse_smoothing(const std::string& name) {
    if (name == "none") return Smoothing::None;
    if (name == "floor") return Smoothing::Floor;
    if (name == "add-k") return Smoothing::AddK;
    if (name == "exp") return Smoothing::Exp;
    throw ConfigError("unknown BLEU smoothing '" + name + "' (expected none|floor|add-k|exp)");
}

const char* smoothing_name(Smoothing s) {
    switch (s) {
    case Smoothing::None: return "none";
    case Smoothing::Floor: return "floor";
    case Smoothing::AddK: return "add-k";
    case Smoothing::Exp: return "exp";
    }
    return "?";
}

void BleuConfig::validate() const {
    if (max_order < 1)
        throw ConfigError("BLEU max_order must be >= 1");
    if (!weights.empty()) {
        if (weights.size() != static_cast<std::size_t>(max_order))
            throw ConfigError("BLEU weights must have max_order entries");
        double sum = 0;
        for (double w : weights) {
            if (!(w > 0))
                throw ConfigError("BLEU weights must be positive");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ConfigError("BLEU weights must sum to 1");
    }
    if (tokenizer != "13a" && tokenizer != "none")
        throw ConfigError("unknown BLEU tokenizer '" + tokenizer + "' (expected 13a|none)");
}

std::string BleuConfig::signature() const {
    std::string sig = "nrefs:1|case:";
    sig += lowercase ? "lc" : "mixed";
    sig += "|eff:";
    sig += effective_order ? "yes" : "no";
    sig += "|tok:" + tokenizer + "|smooth:" + smoothing_name(smoothing);
    if (max_order != 4)
        sig += "|order:" + std::to_string(max_order);
    if (!weights.empty())
        sig += "|weights:custom";
    return sig;
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
    if (matches.empty()) {
        matches.assign(other.matches.size(), 0);
        totals.assign(other.totals.size(), 0);
    }
    for (std::size_t i = 0; i < matches.size(); ++i) {
        matches[i] += other.matches[i];
        totals[i] += other.totals[i];
    }
    hyp_len += other.hyp_len;
    ref_len += other.ref_len;
    return *this;
}

std::vector<std::string> bleu_tokenize(const std::string& sentence, const BleuConfig& config) {
    std::string s = sentence;
    if (config.lowercase)
        s = text::casefold(s);
    return config.tokenizer == "none" ? split_whitespace(s) : tokenize_13a(s);
}

BleuStats bleu_sentence_stats(const std::string& hypothesis, const std::string& reference,
                              const BleuConfig& config) {
    const auto hyp = bleu_tokenize(hypothesis, config);
    const auto ref = bleu_tokenize(reference, config);
    BleuStats st;
    st.hyp_len = hyp.size();
    st.ref_len = ref.size();
    for (int n = 1; n <= config.max_order; ++n) {
        const auto h = ngram_counts<std::string>(hyp, static_cast<std::size_t>(n));
        const auto r = ngram_counts<std::string>(ref, static_cast<std::size_t>(n));
        st.matches.push_back(clipped_matches(h, r));
        st.totals.push_back(total_count(h));
    }
    return st;
}

ScoreReport bleu_from_stats(const BleuStats& stats, const BleuConfig& config) {
    config.validate();
    const auto order = static_cast<std::size_t>(config.max_order);
    ScoreReport rep;
    rep.metric = "BLEU";
    rep.signature = config.signature();
    rep.hyp_len = stats.hyp_len;
    rep.ref_len = stats.ref_len;

    const double sys_len = static_cast<double>(stats.hyp_len);
    const double ref_len = static_cast<double>(stats.ref_len);
    double bp = 1.0;
    if (stats.hyp_len < stats.ref_len)
        bp = stats.hyp_len > 0 ? std::exp(1.0 - ref_len / sys_len) : 0.0;
    rep.brevity_penalty = bp;

    std::vector<double> precisions(order, 0.0);  // percent, as the reference scorer keeps them
    std::vector<double> correct(stats.matches.begin(), stats.matches.end());
    std::vector<double> total(stats.totals.begin(), stats.totals.end());
    correct.resize(order, 0.0);
    total.resize(order, 0.0);

    const bool any_match = std::any_of(correct.begin(), correct.end(), [](double c) { return c != 0; });
    if (!any_match) {
        rep.score = 0.0;
        rep.precisions.assign(order, 0.0);
        return rep;
    }

    double smooth_value = config.smooth_value;
    if (smooth_value < 0)
        smooth_value = config.smoothing == Smoothing::AddK ? 1.0 : 0.1;

    double smooth_mteval = 1.0;
    std::size_t eff_order = order;
    for (std::size_t n = 1; n <= order; ++n) {
        if (config.smoothing == Smoothing::AddK && n > 1) {
            correct[n - 1] += smooth_value;
            total[n - 1] += smooth_value;
        }
        if (total[n - 1] == 0)
            break;
        if (config.effective_order)
            eff_order = n;
        if (correct[n - 1] == 0) {
            if (config.smoothing == Smoothing::Exp) {
                smooth_mteval *= 2;
                precisions[n - 1] = 100.0 / (smooth_mteval * total[n - 1]);
            } else if (config.smoothing == Smoothing::Floor) {
                precisions[n - 1] = 100.0 * smooth_value / total[n - 1];
            }
        } else {
            precisions[n - 1] = 100.0 * correct[n - 1] / total[n - 1];
        }
    }

    double log_sum = 0.0;
    if (config.weights.empty()) {
        for (std::size_t n = 0; n < eff_order; ++n)
            log_sum += scorer_log(precisions[n]);
        log_sum /= static_cast<double>(eff_order);
    } else {
        double wsum = 0.0;
        for (std::size_t n = 0; n < eff_order; ++n) {
            log_sum += config.weights[n] * scorer_log(precisions[n]);
            wsum += config.weights[n];
        }
        log_sum /= wsum;
    }
    // exp(log 100) can land a few ulps above 100.
    rep.score = std::min(100.0, bp * std::exp(log_sum));
    rep.precisions.reserve(order);
    for (double p : precisions)
        rep.precisions.push_back(p / 100.0);
    return rep;
}

ScoreReport bleu(const std::vector<std::string>& hypotheses, const std::vector<std::string>& references,
                 const BleuConfig& config) {
    config.validate();
    if (hypotheses.size() != references.size())
        throw Error("BLEU: " + std::to_string(hypotheses.size()) + " hypotheses vs " +
                    std::to_string(references.size()) + " references");
    if (hypotheses.empty())
        throw Error("BLEU: empty input");
    BleuStats corpus;
    for (std::size_t i = 0; i < hypotheses.size(); ++i)
        corpus += bleu_sentence_stats(hypotheses[i], references[i], config);
    return bleu_from_stats(corpus, config);
}

} // namespace lrmt::metrics
