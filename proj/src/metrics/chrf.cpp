#include "lrmt/metrics/chrf.hpp"

#include <algorithm>
#include <span>
#include <string_view>

#include "lrmt/error.hpp"
#include "lrmt/metrics/ngram.hpp"
#include "lrmt/metrics/tokenizer_13a.hpp"
#include "lrmt/text/utf8.hpp"

namespace lrmt::metrics {

namespace {

constexpr std::string_view kPuncts = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

bool is_punct(char32_t c) {
    return c < 0x80 && kPuncts.find(static_cast<char>(c)) != std::string_view::npos;
}

template <typename T>
std::array<std::size_t, 3> match_stats(const NgramCounts<T>& hyp, const NgramCounts<T>& ref) {
    // Hypothesis n-grams are not counted when the reference has none of
    // that order.
    return {ref.empty() ? 0 : total_count(hyp), total_count(ref), clipped_matches(hyp, ref)};
}

std::u32string char_stream(const std::string& s, const ChrfConfig& config) {
    auto cps = text::decode(config.lowercase ? text::casefold(s) : s);
    if (config.whitespace)
        return cps;
    std::u32string out;
    for (char32_t c : cps)
        if (!text::is_split_space(c))
            out.push_back(c);
    return out;
}

} // namespace

void ChrfConfig::validate() const {
    if (char_order < 1 || word_order < 0 || !(beta > 0))
        throw ConfigError("chrF requires char_order >= 1, word_order >= 0, beta > 0");
}

std::string ChrfConfig::signature() const {
    std::string sig = "nrefs:1|case:";
    sig += lowercase ? "lc" : "mixed";
    sig += "|eff:";
    sig += eps_smoothing ? "no" : "yes";
    sig += "|nc:" + std::to_string(char_order) + "|nw:" + std::to_string(word_order);
    sig += "|space:";
    sig += whitespace ? "yes" : "no";
    return sig;
}

ChrfStats& ChrfStats::operator+=(const ChrfStats& other) {
    if (orders.empty())
        orders.assign(other.orders.size(), {0, 0, 0});
    for (std::size_t i = 0; i < orders.size(); ++i)
        for (int k = 0; k < 3; ++k)
            orders[i][k] += other.orders[i][k];
    hyp_chars += other.hyp_chars;
    ref_chars += other.ref_chars;
    return *this;
}

std::vector<std::string> chrf_words(const std::string& sentence) {
    std::vector<std::string> out;
    for (const auto& w : split_whitespace(sentence)) {
        const auto cps = text::decode(w);
        if (cps.size() == 1) {
            out.push_back(w);
        } else if (is_punct(cps.back())) {
            out.push_back(w.substr(0, w.size() - 1));
            out.push_back(w.substr(w.size() - 1));
        } else if (is_punct(cps.front())) {
            out.push_back(w.substr(0, 1));
            out.push_back(w.substr(1));
        } else {
            out.push_back(w);
        }
    }
    return out;
}

ChrfStats chrf_sentence_stats(const std::string& hypothesis, const std::string& reference,
                              const ChrfConfig& config) {
    ChrfStats st;
    const auto hc = char_stream(hypothesis, config);
    const auto rc = char_stream(reference, config);
    st.hyp_chars = hc.size();
    st.ref_chars = rc.size();
    for (int n = 1; n <= config.char_order; ++n) {
        const auto h = ngram_counts<char32_t>(hc, static_cast<std::size_t>(n));
        const auto r = ngram_counts<char32_t>(rc, static_cast<std::size_t>(n));
        st.orders.push_back(match_stats(h, r));
    }
    if (config.word_order > 0) {
        const auto hs = config.lowercase ? text::casefold(hypothesis) : hypothesis;
        const auto rs = config.lowercase ? text::casefold(reference) : reference;
        const auto hw = chrf_words(hs);
        const auto rw = chrf_words(rs);
        for (int n = 1; n <= config.word_order; ++n) {
            const auto h = ngram_counts<std::string>(hw, static_cast<std::size_t>(n));
            const auto r = ngram_counts<std::string>(rw, static_cast<std::size_t>(n));
            st.orders.push_back(match_stats(h, r));
        }
    }
    return st;
}

ScoreReport chrf_from_stats(const ChrfStats& stats, const ChrfConfig& config) {
    config.validate();
    ScoreReport rep;
    rep.metric = config.word_order > 0 ? "chrF++" : "chrF";
    rep.signature = config.signature();
    rep.hyp_len = stats.hyp_chars;
    rep.ref_len = stats.ref_chars;

    constexpr double eps = 1e-16;
    const double factor = config.beta * config.beta;
    double eps_score = 0.0;
    double avg_prec = 0.0;
    double avg_rec = 0.0;
    int effective_order = 0;
    for (const auto& [n_hyp, n_ref, n_match] : stats.orders) {
        const double prec = n_hyp > 0 ? static_cast<double>(n_match) / static_cast<double>(n_hyp) : eps;
        const double rec = n_ref > 0 ? static_cast<double>(n_match) / static_cast<double>(n_ref) : eps;
        const double denom = factor * prec + rec;
        eps_score += denom > 0 ? (1 + factor) * prec * rec / denom : eps;
        rep.precisions.push_back(n_hyp > 0 ? prec : 0.0);
        rep.recalls.push_back(n_ref > 0 ? rec : 0.0);
        if (n_hyp > 0 && n_ref > 0) {
            avg_prec += prec;
            avg_rec += rec;
            ++effective_order;
        }
    }

    if (config.eps_smoothing) {
        rep.score = std::min(100.0, 100.0 * eps_score / static_cast<double>(config.order()));
        return rep;
    }
    if (effective_order == 0) {
        avg_prec = avg_rec = 0.0;
    } else {
        avg_prec /= effective_order;
        avg_rec /= effective_order;
    }
    if (avg_prec + avg_rec != 0.0) {
        double score = (1 + factor) * avg_prec * avg_rec;
        score /= (factor * avg_prec) + avg_rec;
        rep.score = std::min(100.0, 100.0 * score);
    } else {
        rep.score = 0.0;
    }
    return rep;
}

ScoreReport chrf_pp(const std::vector<std::string>& hypotheses, const std::vector<std::string>& references,
                    const ChrfConfig& config) {
    config.validate();
    if (hypotheses.size() != references.size())
        throw Error("chrF++: " + std::to_string(hypotheses.size()) + " hypotheses vs " +
                    std::to_string(references.size()) + " references");
    if (hypotheses.empty())
        throw Error("chrF++: empty input");
    ChrfStats corpus;
    for (std::size_t i = 0; i < hypotheses.size(); ++i)
        corpus += chrf_sentence_stats(hypotheses[i], references[i], config);
    return chrf_from_stats(corpus, config);
}

} // namespace lrmt::metrics
