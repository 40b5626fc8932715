#include "lrmt/distill/toy_world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <fstream>
#include <numeric>
#include <set>

#include "lrmt/error.hpp"
#include "lrmt/random.hpp"
#include "lrmt/text/utf8.hpp"

namespace lrmt::distill {

void ToyWorldConfig::validate() const {
    if (concepts < 4)
        throw ConfigError("toy world: need at least 4 concepts");
    if (!(dictionary_coverage >= 0.0 && dictionary_coverage <= 1.0))
        throw ConfigError("toy world: dictionary_coverage must be in [0, 1]");
    if (train_size == 0 || finetune_size == 0 || test_size == 0)
        throw ConfigError("toy world: corpus sizes must be positive");
}

namespace {

std::string join(const std::vector<std::string>& words) {
    std::string s;
    for (const auto& w : words) {
        if (!s.empty())
            s += ' ';
        s += w;
    }
    return s;
}

char pick(Rng& rng, std::string_view letters) { return letters[rng.index(letters.size())]; }

std::string hrl_word(Rng& rng) {
    constexpr std::string_view consonants = "bdfghklmnprstwz";
    constexpr std::string_view vowels = "aeiou";
    constexpr std::string_view codas = "lrst";
    std::string w;
    if (rng.index(5) == 0)
        w += pick(rng, vowels);
    const auto syllables = 1 + rng.index(2);
    for (std::size_t i = 0; i < syllables; ++i) {
        w += pick(rng, consonants);
        w += pick(rng, vowels);
    }
    if (rng.index(10) < 3)
        w += pick(rng, codas);
    const auto ending = rng.index(20);
    const bool open = std::string_view(vowels).find(w.back()) != std::string_view::npos;
    if (ending < 7)
        w += "en";
    else if (ending < 9 && open)
        w += "n";
    else if (ending < 11 && open)
        w += "nn";
    return w;
}

// The LRL cognate: first vowel shifted to a Luxembourgish-looking spelling.
std::string lrl_cognate(const std::string& hrl) {
    std::string out = hrl;
    const auto pos = out.find_first_of("aeiou");
    static const std::map<char, std::string> shift = {
        {'a', "ä"}, {'e', "ë"}, {'i', "ie"}, {'o', "ou"}, {'u', "ue"}};
    out.replace(pos, 1, shift.at(out[pos]));
    return out;
}

std::string en_word(Rng& rng) {
    constexpr std::string_view consonants = "bcdfgjklmprstvwy";
    constexpr std::string_view vowels = "aeiou";
    std::string w;
    const auto syllables = 1 + rng.index(2);
    for (std::size_t i = 0; i < syllables; ++i) {
        w += pick(rng, consonants);
        w += pick(rng, vowels);
    }
    w += pick(rng, consonants);
    return w;
}

// Form the deletion rule gives the word before a non-retaining successor.
std::string reduced(const std::string& word, const pseudo::EifelerRuleConfig& rule) {
    const auto out = pseudo::apply_eifeler(word + " b", rule);
    return out.substr(0, out.size() - 2);
}

std::vector<int> sample_concepts(Rng& rng, const std::vector<double>& cumulative, std::size_t length) {
    std::vector<int> ids;
    for (std::size_t i = 0; i < length; ++i) {
        const double u = rng.unit() * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        ids.push_back(static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                                static_cast<std::ptrdiff_t>(cumulative.size()) - 1)));
    }
    return ids;
}

} // namespace

corpus::ParallelRecord ToyWorld::sentence(const std::string& id, const std::vector<int>& concept_ids) const {
    std::vector<std::string> hrl, lrl, en;
    for (int c : concept_ids) {
        const auto& meaning = concepts.at(static_cast<std::size_t>(c));
        hrl.push_back(meaning.hrl);
        lrl.push_back(meaning.lrl);
        en.push_back(meaning.en);
    }
    corpus::ParallelRecord r;
    r.id = id;
    r.hrl = join(hrl);
    r.lrl = pseudo::apply_eifeler(join(lrl), rule);
    r.en = join(swap_adjacent_pairs(std::move(en)));
    return r;
}

pseudo::BilingualDictionary ToyWorld::dictionary() const {
    pseudo::BilingualDictionary dict;
    std::size_t line = 0;
    for (const auto& c : concepts)
        if (c.in_dictionary)
            dict.insert(c.hrl, c.lrl, ++line);
    return dict;
}

ToyLexicon ToyWorld::teacher_lexicon() const {
    ToyLexicon lexicon;
    for (const auto& c : concepts) {
        lexicon.emplace(c.lrl, c.en);
        lexicon.emplace(reduced(c.lrl, rule), c.en);
    }
    return lexicon;
}

ToyWorld make_toy_world(const ToyWorldConfig& config) {
    config.validate();
    ToyWorld world;
    world.rule = pseudo::EifelerRuleConfig::standard();
    Rng rng(config.seed);
    std::set<std::string> taken_source, taken_en;

    while (world.concepts.size() < static_cast<std::size_t>(config.concepts)) {
        ToyConcept c;
        c.hrl = hrl_word(rng);
        c.lrl = lrl_cognate(c.hrl);
        const std::set<std::string> forms = {c.hrl, reduced(c.hrl, world.rule), c.lrl, reduced(c.lrl, world.rule)};
        bool clash = false;
        for (const auto& f : forms)
            clash = clash || taken_source.contains(f);
        if (clash)
            continue;
        do
            c.en = en_word(rng);
        while (taken_en.contains(c.en));
        taken_source.insert(forms.begin(), forms.end());
        taken_en.insert(c.en);
        world.concepts.push_back(std::move(c));
    }

    std::vector<std::size_t> order(world.concepts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    const auto covered = static_cast<std::size_t>(
        std::llround(config.dictionary_coverage * static_cast<double>(world.concepts.size())));
    for (std::size_t i = 0; i < covered; ++i)
        world.concepts[order[i]].in_dictionary = true;
    return world;
}

ToyCorpora sample_toy_corpora(const ToyWorld& world, const ToyWorldConfig& config) {
    config.validate();
    Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto n = world.concepts.size();
    std::vector<double> zipf(n), uniform(n);
    double acc_z = 0, acc_u = 0;
    for (std::size_t i = 0; i < n; ++i) {
        zipf[i] = acc_z += 1.0 / static_cast<double>(i + 1);
        uniform[i] = acc_u += 1.0;
    }

    std::set<std::string> seen;
    auto fill = [&](const std::string& prefix, std::size_t count, const std::vector<double>& weights,
                    const std::vector<std::size_t>& lengths) {
        corpus::Corpus out;
        std::size_t attempts = 0;
        while (out.size() < count) {
            if (++attempts > 1000 * count)
                throw Error("toy world: cannot draw " + std::to_string(count) + " distinct " + prefix +
                            " sentences");
            const auto len = lengths[rng.index(lengths.size())];
            auto rec = world.sentence("", sample_concepts(rng, weights, len));
            if (!seen.insert(*rec.lrl).second)
                continue;
            char id[32];
            std::snprintf(id, sizeof id, "%s-%05zu", prefix.c_str(), out.size());
            rec.id = id;
            out.push_back(std::move(rec));
        }
        return out;
    };

    ToyCorpora c;
    c.train = fill("train", config.train_size, zipf, {2, 4, 6, 8});
    c.finetune = fill("ft", config.finetune_size, zipf, {2, 4, 6, 8});
    c.test_a = fill("testa", config.test_size, zipf, {2, 4, 6, 8});
    c.test_b = fill("testb", config.test_size, uniform, {2, 4});
    return c;
}

void prepare_toy_corpora(const std::filesystem::path& dir, const ToyWorldConfig& config) {
    const auto world = make_toy_world(config);
    const auto corpora = sample_toy_corpora(world, config);
    std::filesystem::create_directories(dir);
    corpus::save_corpus(dir / kToyTrainFile, corpora.train, corpus::Format::Jsonl);
    corpus::save_corpus(dir / kToyFinetuneFile, corpora.finetune, corpus::Format::Jsonl);
    corpus::save_corpus(dir / kToyTestAFile, corpora.test_a, corpus::Format::Jsonl);
    corpus::save_corpus(dir / kToyTestBFile, corpora.test_b, corpus::Format::Jsonl);
    {
        std::ofstream out(dir / kToyDictionaryFile);
        pseudo::write_dictionary(out, world.dictionary());
    }
    std::ofstream out(dir / kToyLexiconFile);
    write_toy_lexicon(out, world.teacher_lexicon());
}

} // namespace lrmt::distill
