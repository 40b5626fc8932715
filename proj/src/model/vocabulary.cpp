#include "lrmt/model/vocabulary.hpp"

#include <set>
#include <sstream>

#include "lrmt/error.hpp"

namespace lrmt::model {

namespace {
const std::vector<std::string> kReservedTokens = {"<pad>", "<s>", "</s>", "<unk>"};
}

std::vector<std::string> split_words(const std::string& sentence) {
    std::vector<std::string> out;
    std::istringstream in(sentence);
    std::string w;
    while (in >> w)
        out.push_back(w);
    return out;
}

Vocabulary::Vocabulary() {
    for (const auto& t : kReservedTokens)
        add(t);
}

Vocabulary Vocabulary::from_sentences(const std::vector<std::string>& sentences) {
    std::set<std::string> words;
    for (const auto& s : sentences)
        for (auto& w : split_words(s))
            words.insert(std::move(w));
    Vocabulary v;
    for (const auto& w : words)
        v.add(w);
    return v;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
    if (tokens.size() < kReservedTokens.size() ||
        !std::equal(kReservedTokens.begin(), kReservedTokens.end(), tokens.begin()))
        throw Error("vocabulary must start with <pad> <s> </s> <unk>");
    Vocabulary v;
    for (std::size_t i = kReservedTokens.size(); i < tokens.size(); ++i) {
        if (v.contains(tokens[i]))
            throw Error("duplicate vocabulary token '" + tokens[i] + "'");
        v.add(tokens[i]);
    }
    return v;
}

int Vocabulary::add(const std::string& token) {
    auto [it, inserted] = index_.try_emplace(token, static_cast<int>(tokens_.size()));
    if (inserted)
        tokens_.push_back(token);
    return it->second;
}

int Vocabulary::index(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int index) const {
    if (index < 0 || index >= size())
        throw Error("vocabulary index " + std::to_string(index) + " out of range");
    return tokens_[static_cast<std::size_t>(index)];
}

std::vector<int> Vocabulary::encode(const std::string& sentence) const {
    std::vector<int> out;
    for (const auto& w : split_words(sentence))
        out.push_back(index(w));
    return out;
}

std::string Vocabulary::decode(const std::vector<int>& indices) const {
    std::string out;
    for (int i : indices) {
        if (i == kEos)
            break;
        if (i < kReserved && i != kUnk)
            continue;
        if (!out.empty())
            out += ' ';
        out += token(i);
    }
    return out;
}

} // namespace lrmt::model
