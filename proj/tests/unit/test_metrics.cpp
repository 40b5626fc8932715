#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include <json.hpp>

#include "lrmt/metrics/bleu.hpp"
#include "lrmt/metrics/chrf.hpp"
#include "lrmt/metrics/golden.hpp"
#include "lrmt/metrics/ngram.hpp"
#include "lrmt/metrics/tokenizer_13a.hpp"

using namespace lrmt::metrics;

namespace {

const std::string kData = LRMT_TEST_DATA;

// Independent n-gram matcher: enumerates every hypothesis position and
// greedily consumes an unused matching reference position.
std::size_t brute_force_matches(const std::vector<std::string>& hyp, const std::vector<std::string>& ref,
                                std::size_t n) {
    if (hyp.size() < n || ref.size() < n)
        return 0;
    std::vector<bool> used(ref.size() - n + 1, false);
    std::size_t matched = 0;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
        for (std::size_t j = 0; j + n <= ref.size(); ++j) {
            if (used[j])
                continue;
            bool eq = true;
            for (std::size_t k = 0; k < n && eq; ++k)
                eq = hyp[i + k] == ref[j + k];
            if (eq) {
                used[j] = true;
                ++matched;
                break;
            }
        }
    }
    return matched;
}

std::vector<std::string> random_words(std::mt19937& gen, int min_len, int max_len, int vocab) {
    std::uniform_int_distribution<int> len(min_len, max_len);
    std::uniform_int_distribution<int> word(0, vocab - 1);
    std::vector<std::string> out;
    const int n = len(gen);
    for (int i = 0; i < n; ++i)
        out.push_back("w" + std::to_string(word(gen)));
    return out;
}

std::string join(const std::vector<std::string>& words) {
    std::string s;
    for (const auto& w : words)
        s += (s.empty() ? "" : " ") + w;
    return s;
}

} // namespace

TEST(Ngram, CountsUnigramsAndFullOrder) {
    const std::vector<std::string> toks = {"a", "b", "a"};
    const auto uni = ngram_counts<std::string>(toks, 1);
    EXPECT_EQ(uni.size(), 2u);
    EXPECT_EQ(uni.at({"a"}), 2u);
    EXPECT_EQ(uni.at({"b"}), 1u);
    const auto tri = ngram_counts<std::string>(toks, 3);
    ASSERT_EQ(tri.size(), 1u);
    EXPECT_EQ(tri.at({"a", "b", "a"}), 1u);
    EXPECT_TRUE(ngram_counts<std::string>(toks, 4).empty());
    EXPECT_THROW(ngram_counts<std::string>(toks, 0), lrmt::Error);
}

TEST(Ngram, TotalIsLengthMinusOrderPlusOne) {
    std::mt19937 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto toks = random_words(gen, 0, 12, 4);
        for (std::size_t n = 1; n <= 5; ++n) {
            const auto expected = toks.size() >= n ? toks.size() - n + 1 : 0;
            EXPECT_EQ(total_count(ngram_counts<std::string>(toks, n)), expected);
        }
    }
}

TEST(Ngram, ClippedMatchesAgreeWithBruteForce) {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 500; ++trial) {
        const auto hyp = random_words(gen, 0, 10, 4);
        const auto ref = random_words(gen, 0, 10, 4);
        for (std::size_t n = 1; n <= 4; ++n) {
            const auto h = ngram_counts<std::string>(hyp, n);
            const auto r = ngram_counts<std::string>(ref, n);
            const auto m = clipped_matches(h, r);
            EXPECT_EQ(m, brute_force_matches(hyp, ref, n));
            EXPECT_LE(m, std::min(total_count(h), total_count(r)));
        }
    }
}

TEST(Ngram, RemovingACorrectTokenNeverIncreasesUnigramMatches) {
    std::mt19937 gen(5);
    for (int trial = 0; trial < 300; ++trial) {
        auto hyp = random_words(gen, 1, 10, 3);
        const auto ref = random_words(gen, 1, 10, 3);
        for (std::size_t pos = 0; pos < hyp.size(); ++pos) {
            if (std::find(ref.begin(), ref.end(), hyp[pos]) == ref.end())
                continue;
            auto shorter = hyp;
            shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(pos));
            EXPECT_LE(clipped_matches(ngram_counts<std::string>(shorter, 1), ngram_counts<std::string>(ref, 1)),
                      clipped_matches(ngram_counts<std::string>(hyp, 1), ngram_counts<std::string>(ref, 1)));
        }
    }
}

TEST(Ngram, RemovalCanJoinNeighboursIntoANewBigramMatch) {
    // Deleting "b" fuses "a" and "c" into a bigram the reference contains.
    const std::vector<std::string> hyp = {"a", "b", "c"};
    const std::vector<std::string> shorter = {"a", "c"};
    const std::vector<std::string> ref = {"a", "c", "b"};
    const auto r = ngram_counts<std::string>(ref, 2);
    EXPECT_EQ(clipped_matches(ngram_counts<std::string>(hyp, 2), r), 0u);
    EXPECT_EQ(clipped_matches(ngram_counts<std::string>(shorter, 2), r), 1u);
}

TEST(Tokenizer13a, SplitsPunctuationButKeepsNumbers) {
    EXPECT_EQ(tokenize_13a("Hello, world!"), (std::vector<std::string>{"Hello", ",", "world", "!"}));
    EXPECT_EQ(tokenize_13a("pi is 3.14, e is 2,71."),
              (std::vector<std::string>{"pi", "is", "3.14", ",", "e", "is", "2,71", "."}));
    EXPECT_EQ(tokenize_13a("10-20 re-run"), (std::vector<std::string>{"10", "-", "20", "re-run"}));
    EXPECT_EQ(tokenize_13a("A&amp;B d'Stad"), (std::vector<std::string>{"A", "&", "B", "d'Stad"}));
    EXPECT_TRUE(tokenize_13a("").empty());
}

TEST(Bleu, IdentityIsHundred) {
    const auto rep = bleu({"the cat sat on the mat"}, {"the cat sat on the mat"});
    EXPECT_DOUBLE_EQ(rep.score, 100.0);
    EXPECT_DOUBLE_EQ(rep.brevity_penalty, 1.0);
    for (double p : rep.precisions)
        EXPECT_DOUBLE_EQ(p, 1.0);
}

TEST(Bleu, HandDerivedBrevityCase) {
    // p1..p4 = 4/4, 3/3, 2/2, 1/1; c = 4, r = 6; BP = exp(1 - 6/4).
    const auto rep = bleu({"the cat sat on"}, {"the cat sat on the mat"});
    EXPECT_EQ(rep.hyp_len, 4u);
    EXPECT_EQ(rep.ref_len, 6u);
    EXPECT_NEAR(rep.brevity_penalty, std::exp(-0.5), 1e-15);
    for (double p : rep.precisions)
        EXPECT_DOUBLE_EQ(p, 1.0);
    EXPECT_NEAR(rep.score, 100.0 * std::exp(-0.5), 1e-9);
    EXPECT_NEAR(rep.score, 60.653, 1e-3);
}

TEST(Bleu, ErrorsAndEmptyHypothesis) {
    EXPECT_THROW(bleu({"a"}, {"a", "b"}), lrmt::Error);
    EXPECT_THROW(bleu({}, {}), lrmt::Error);
    const auto rep = bleu({""}, {"something here"});
    EXPECT_EQ(rep.score, 0.0);
    EXPECT_EQ(rep.brevity_penalty, 0.0);
}

TEST(Bleu, ExpSmoothingHalvesSuccessiveZeroOrders) {
    // 5 unigrams all matched, no higher-order matches.
    BleuStats st{{5, 0, 0, 0}, {5, 4, 3, 2}, 5, 5};
    const auto rep = bleu_from_stats(st, {});
    EXPECT_DOUBLE_EQ(rep.precisions[0], 1.0);
    EXPECT_DOUBLE_EQ(rep.precisions[1], 1.0 / (2 * 4));
    EXPECT_DOUBLE_EQ(rep.precisions[2], 1.0 / (4 * 3));
    EXPECT_DOUBLE_EQ(rep.precisions[3], 1.0 / (8 * 2));
}

TEST(Bleu, EffectiveOrderGivesShortIdentityHundred) {
    BleuConfig cfg;
    cfg.effective_order = true;
    EXPECT_DOUBLE_EQ(bleu({"a"}, {"a"}, cfg).score, 100.0);
    EXPECT_DOUBLE_EQ(bleu({"a"}, {"a"}).score, 0.0);
}

TEST(Bleu, ConfigValidation) {
    BleuConfig cfg;
    cfg.weights = {0.5, 0.5};
    EXPECT_THROW(cfg.validate(), lrmt::ConfigError);
    cfg.weights = {0.25, 0.25, 0.25, 0.25};
    EXPECT_NO_THROW(cfg.validate());
    cfg.tokenizer = "intl";
    EXPECT_THROW(cfg.validate(), lrmt::ConfigError);
}

TEST(Bleu, InvariantUnderJointTokenRenaming) {
    std::mt19937 gen(21);
    BleuConfig cfg;
    cfg.tokenizer = "none";
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::string> hyps, refs, hyps2, refs2;
        for (int s = 0; s < 5; ++s) {
            auto h = random_words(gen, 1, 12, 5);
            auto r = random_words(gen, 1, 12, 5);
            hyps.push_back(join(h));
            refs.push_back(join(r));
            for (auto* v : {&h, &r})
                for (auto& w : *v)
                    w = "renamed_" + std::string(w.rbegin(), w.rend());
            hyps2.push_back(join(h));
            refs2.push_back(join(r));
        }
        EXPECT_DOUBLE_EQ(bleu(hyps, refs, cfg).score, bleu(hyps2, refs2, cfg).score);
    }
}

TEST(Chrf, IdentityAndDisjoint) {
    EXPECT_DOUBLE_EQ(chrf_pp({"Ech hunn de Ball gesinn."}, {"Ech hunn de Ball gesinn."}).score, 100.0);
    EXPECT_DOUBLE_EQ(chrf_pp({"xyz qqq"}, {"abc def"}).score, 0.0);
    EXPECT_DOUBLE_EQ(chrf_pp({""}, {"abc"}).score, 0.0);
}

TEST(Chrf, WordsSplitOneEdgePunctuation) {
    EXPECT_EQ(chrf_words("(hi) there, \"x"), (std::vector<std::string>{"(hi", ")", "there", ",", "\"", "x"}));
}

TEST(Chrf, InvariantUnderJointCharacterRenaming) {
    // A bijection over letters that leaves spaces and punctuation alone.
    auto rename = [](const std::string& s) {
        std::string out = s;
        for (auto& c : out)
            if (c >= 'a' && c <= 'z')
                c = static_cast<char>('a' + (c - 'a' + 7) % 26);
        return out;
    };
    std::mt19937 gen(8);
    std::uniform_int_distribution<int> ch(0, 5);
    for (int trial = 0; trial < 100; ++trial) {
        auto make = [&] {
            std::string s;
            int n = 1 + ch(gen) * 3;
            for (int i = 0; i < n; ++i)
                s += (ch(gen) == 0) ? ' ' : static_cast<char>('a' + ch(gen));
            return s;
        };
        const auto h = make();
        const auto r = make();
        EXPECT_DOUBLE_EQ(chrf_pp({h}, {r}).score, chrf_pp({rename(h)}, {rename(r)}).score);
    }
}

TEST(Golden, PerPairScoresMatchReferenceScorer) {
    const auto goldens = load_golden_vectors(kData + "/golden_metrics.jsonl");
    ASSERT_EQ(goldens.size(), 50u);
    for (const auto& g : goldens) {
        EXPECT_NEAR(bleu({g.hyp}, {g.ref}).score, g.bleu, 0.01) << g.hyp << " ||| " << g.ref;
        EXPECT_NEAR(chrf_pp({g.hyp}, {g.ref}).score, g.chrfpp, 0.01) << g.hyp << " ||| " << g.ref;
    }
}

TEST(Golden, CorpusLevelScoresMatchReferenceScorer) {
    const auto goldens = load_golden_vectors(kData + "/golden_metrics.jsonl");
    std::vector<std::string> hyps, refs;
    for (const auto& g : goldens) {
        hyps.push_back(g.hyp);
        refs.push_back(g.ref);
    }
    std::ifstream in(kData + "/golden_corpus.json");
    const auto corpus = nlohmann::json::parse(in);
    EXPECT_NEAR(bleu(hyps, refs).score, corpus.at("bleu").get<double>(), 0.01);
    EXPECT_NEAR(chrf_pp(hyps, refs).score, corpus.at("chrfpp").get<double>(), 0.01);
}

TEST(Golden, RejectsOutOfRangeScores) {
    const auto path = std::filesystem::temp_directory_path() / "lrmt_bad_golden.jsonl";
    std::ofstream(path) << R"({"hyp":"a","ref":"a","bleu":101,"chrfpp":1,"version":"x"})" << '\n';
    EXPECT_THROW(load_golden_vectors(path), lrmt::Error);
    std::ofstream(path) << R"({"hyp":"a","ref":"a","bleu":1,"chrfpp":1,"version":""})" << '\n';
    EXPECT_THROW(load_golden_vectors(path), lrmt::Error);
}
