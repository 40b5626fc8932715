#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lrmt/corpus/corpus.hpp"
#include "lrmt/distill/toy_teacher.hpp"
#include "lrmt/pseudo/dictionary.hpp"
#include "lrmt/pseudo/eifeler.hpp"

namespace lrmt::distill {

/// Parameters of the synthetic three-language world used for the desk-scale
/// distillation experiment.
struct ToyWorldConfig {
    int concepts = 48;
    double dictionary_coverage = 0.75;  // share of concepts in the HRL->LRL dictionary
    std::size_t train_size = 2000;
    std::size_t finetune_size = 100;
    std::size_t test_size = 200;
    std::uint64_t seed = 2024;

    void validate() const;
};

/// One meaning with its word in each language. `lrl` is the base form before
/// the n-deletion rule.
struct ToyConcept {
    std::string hrl;
    std::string lrl;
    std::string en;
    bool in_dictionary = false;
};

/// Sentences are concept sequences of even length. HRL is the word-wise
/// image, LRL the word-wise image with the n-deletion rule applied, and EN the
/// word-wise image with adjacent pairs swapped.
struct ToyWorld {
    std::vector<ToyConcept> concepts;
    pseudo::EifelerRuleConfig rule;

    corpus::ParallelRecord sentence(const std::string& id, const std::vector<int>& concept_ids) const;
    /// HRL -> LRL entries for the covered concepts only.
    pseudo::BilingualDictionary dictionary() const;
    /// Every LRL surface form (full and n-deleted) -> EN word.
    ToyLexicon teacher_lexicon() const;
};

ToyWorld make_toy_world(const ToyWorldConfig& config);

struct ToyCorpora {
    corpus::Corpus train;     // Zipf-weighted concepts, lengths 2..8
    corpus::Corpus finetune;  // same distribution, disjoint sentences
    corpus::Corpus test_a;    // same distribution, disjoint sentences
    corpus::Corpus test_b;    // uniform concepts, lengths 2 and 4
};

ToyCorpora sample_toy_corpora(const ToyWorld& world, const ToyWorldConfig& config);

inline constexpr const char* kToyTrainFile = "train.jsonl";
inline constexpr const char* kToyFinetuneFile = "finetune.jsonl";
inline constexpr const char* kToyTestAFile = "test_a.jsonl";
inline constexpr const char* kToyTestBFile = "test_b.jsonl";
inline constexpr const char* kToyDictionaryFile = "dict.tsv";
inline constexpr const char* kToyLexiconFile = "teacher_lexicon.tsv";

/// Writes the four corpora, the partial dictionary and the teacher lexicon
/// into `dir` (created if needed).
void prepare_toy_corpora(const std::filesystem::path& dir, const ToyWorldConfig& config);

} // namespace lrmt::distill
