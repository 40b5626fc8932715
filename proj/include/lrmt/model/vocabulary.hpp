#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace lrmt::model {

/// Token <-> index bijection with PAD, BOS, EOS and UNK at indices 0..3.
class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kBos = 1;
    static constexpr int kEos = 2;
    static constexpr int kUnk = 3;
    static constexpr int kReserved = 4;

    Vocabulary();

    /// Reserved tokens followed by the distinct words of `sentences`
    /// (whitespace tokenized) in lexicographic order.
    static Vocabulary from_sentences(const std::vector<std::string>& sentences);
    /// `tokens` must start with the four reserved tokens; throws otherwise or
    /// on duplicates.
    static Vocabulary from_tokens(std::vector<std::string> tokens);

    /// Returns the index of an existing token, or inserts it.
    int add(const std::string& token);

    int index(const std::string& token) const;  // kUnk when absent
    bool contains(const std::string& token) const { return index_.contains(token); }
    const std::string& token(int index) const;
    int size() const { return static_cast<int>(tokens_.size()); }
    const std::vector<std::string>& tokens() const { return tokens_; }

    /// Whitespace-tokenizes and maps to indices; no BOS/EOS added.
    std::vector<int> encode(const std::string& sentence) const;
    /// Joins non-reserved tokens with single spaces, stopping at EOS.
    std::string decode(const std::vector<int>& indices) const;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> index_;
};

std::vector<std::string> split_words(const std::string& sentence);

} // namespace lrmt::model
