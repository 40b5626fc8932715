#include <gtest/gtest.h>

#include <sstream>

#include "lrmt/pseudo/dictionary.hpp"
#include "lrmt/pseudo/eifeler.hpp"
#include "lrmt/pseudo/pseudo.hpp"
#include "lrmt/pseudo/tokenize.hpp"
#include "lrmt/random.hpp"
#include "lrmt/text/utf8.hpp"

using namespace lrmt::pseudo;

namespace {

BilingualDictionary dict_from(const std::string& tsv) {
    std::stringstream in(tsv);
    return read_dictionary(in);
}

std::string random_sentence(lrmt::Rng& rng) {
    static const std::vector<std::string> words = {"den", "Mann", "an", "Ball", "hunn", "si", "Apel", "Zuch",
                                                   "ënn", "Hannen", "wann", "nn", "N", "Dënn", "nnn", "Dinnn"};
    static const std::vector<std::string> seps = {" ", " ", ", ", " - ", ". ", "… ", "? ", "  "};
    std::string s;
    const auto n = 1 + rng.index(8);
    for (std::size_t i = 0; i < n; ++i) {
        if (i)
            s += seps[rng.index(seps.size())];
        s += words[rng.index(words.size())];
    }
    if (rng.index(2))
        s += ".";
    return s;
}

} // namespace

TEST(Dictionary, BuildAndLookup) {
    EXPECT_EQ(dict_from("").size(), 0u);
    const auto d = dict_from("Haus\tHaus\nund\tan\n");
    EXPECT_EQ(d.size(), 2u);
    ASSERT_TRUE(d.lookup("Und"));
    EXPECT_EQ(*d.lookup("Und"), "an");
    EXPECT_FALSE(d.lookup("Katze"));
}

TEST(Dictionary, DuplicateAndEmptyFieldErrors) {
    try {
        dict_from("der\tden\nDer\tde\n");
        FAIL();
    } catch (const lrmt::Error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("der"), std::string::npos);
        EXPECT_NE(msg.find("1"), std::string::npos);
        EXPECT_NE(msg.find("2"), std::string::npos);
    }
    try {
        dict_from("a\tb\n\tc\n");
        FAIL();
    } catch (const lrmt::Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(Tokenize, RoundTripAndKinds) {
    const auto t = tokenize("Katze und Hund.");
    ASSERT_EQ(t.tokens.size(), 6u);
    EXPECT_EQ(t.tokens[0].text, "Katze");
    EXPECT_EQ(t.tokens[0].kind, TokenKind::Word);
    EXPECT_EQ(t.tokens[5].text, ".");
    lrmt::Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto s = random_sentence(rng);
        EXPECT_EQ(detokenize(tokenize(s)), s);
    }
}

TEST(Substitute, ReplacesWordsAndMirrorsCase) {
    const auto d = dict_from("und\tan\nhaus\thaus\n");
    EXPECT_EQ(substitute_tokens("", d), "");
    EXPECT_EQ(substitute_tokens("Katze und Hund.", d), "Katze an Hund.");
    EXPECT_EQ(substitute_tokens("Und  Haus,und", d), "An  Haus,an");
    lrmt::Rng rng(4);
    const BilingualDictionary empty;
    for (int i = 0; i < 100; ++i) {
        const auto s = random_sentence(rng);
        EXPECT_EQ(substitute_tokens(s, empty), s);
    }
}

TEST(Eifeler, HandAppliedExamples) {
    const auto cfg = EifelerRuleConfig::standard();
    EXPECT_EQ(apply_eifeler("den Ball", cfg), "de Ball");
    EXPECT_EQ(apply_eifeler("den Apel", cfg), "den Apel");
    EXPECT_EQ(apply_eifeler("wann dann zwee hin nee", cfg), "wann dann zwee hin nee");
    EXPECT_EQ(apply_eifeler("si hunn.", cfg), "si hunn.");
    EXPECT_EQ(apply_eifeler("si hunn", cfg), "si hunn");
    EXPECT_EQ(apply_eifeler("hunn. Mir", cfg), "hunn. Mir");
    EXPECT_EQ(apply_eifeler("hunn, mir", cfg), "hu, mir");
    EXPECT_EQ(apply_eifeler("Den Ëmgang", cfg), "Den Ëmgang");
    EXPECT_EQ(apply_eifeler("n Ball", cfg), "n Ball");
    EXPECT_EQ(apply_eifeler("Dinnn Ball", cfg), "Dinnn Ball");
}

TEST(Eifeler, ExceptionsAndPauseFlag) {
    auto cfg = EifelerRuleConfig::standard();
    cfg.exceptions = {"den"};
    EXPECT_EQ(apply_eifeler("Den Ball", cfg), "Den Ball");
    cfg = EifelerRuleConfig::standard();
    cfg.retain_at_pause = false;
    EXPECT_EQ(apply_eifeler("si hunn.", cfg), "si hu.");
    cfg.retain_before.erase(U'a');
    EXPECT_THROW(cfg.validate(), lrmt::ConfigError);
}

TEST(Eifeler, PropertiesOnRandomSentences) {
    const auto cfg = EifelerRuleConfig::standard();
    lrmt::Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        const auto s = random_sentence(rng);
        const auto once = apply_eifeler(s, cfg);
        const auto ts = tokenize(s).tokens;
        const auto to = tokenize(once).tokens;
        ASSERT_EQ(ts.size(), to.size()) << s;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            ASSERT_EQ(ts[k].kind, to[k].kind);
            if (ts[k].kind == TokenKind::Other) {
                EXPECT_EQ(ts[k].text, to[k].text);
                continue;
            }
            // Only a trailing n / nn may have gone.
            const auto& before = ts[k].text;
            const auto& after = to[k].text;
            ASSERT_EQ(before.compare(0, after.size(), after), 0) << before << " -> " << after;
            const auto removed = before.substr(after.size());
            EXPECT_TRUE(removed.empty() || removed == "n" || removed == "nn") << before << " -> " << after;
        }
        // Words that are only n's (e.g. "nn") are never reduced, so they are
        // the one case where a second pass could see a trailing n.
        EXPECT_EQ(apply_eifeler(once, cfg), once) << s;
    }
}

TEST(PseudoTranslate, ComposedExampleAndIdentity) {
    lrmt::corpus::Corpus c = {{"r1", std::nullopt, "den Ball und den Apel", "the ball and the apple"},
                              {"r2", std::nullopt, std::nullopt, "no source"}};
    const auto d = dict_from("und\tan\n");
    const auto res = pseudo_translate(c, d, EifelerRuleConfig::standard());
    ASSERT_EQ(res.records.size(), 1u);
    EXPECT_EQ(res.dropped_missing_hrl, 1u);
    EXPECT_EQ(*res.records[0].lrl, "de Ball an den Apel");
    EXPECT_EQ(res.records[0].id, "r1");
    EXPECT_EQ(*res.records[0].en, "the ball and the apple");
    EXPECT_TRUE(pseudo_translate({}, d, EifelerRuleConfig::standard()).records.empty());

    auto keep_all = EifelerRuleConfig::standard();
    for (char32_t cp = 0; cp < 0x2000; ++cp)
        keep_all.retain_before.insert(cp);
    keep_all.retain_at_pause = true;
    lrmt::Rng rng(12);
    lrmt::corpus::Corpus many;
    for (int i = 0; i < 50; ++i)
        many.push_back({std::to_string(i), std::nullopt, random_sentence(rng), "x"});
    const auto same = pseudo_translate(many, BilingualDictionary{}, keep_all);
    for (std::size_t i = 0; i < many.size(); ++i)
        EXPECT_EQ(*same.records[i].lrl, *many[i].hrl);
}
