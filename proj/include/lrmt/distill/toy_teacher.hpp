#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lrmt/distill/teacher.hpp"

namespace lrmt::distill {

/// Swaps tokens 0<->1, 2<->3, ...; an odd final token stays in place.
std::vector<std::string> swap_adjacent_pairs(std::vector<std::string> tokens);

/// Surface form -> target word, one pair per line as `surface<TAB>target`.
using ToyLexicon = std::map<std::string, std::string>;

ToyLexicon read_toy_lexicon(std::istream& in);
ToyLexicon load_toy_lexicon(const std::filesystem::path& path);
void write_toy_lexicon(std::ostream& out, const ToyLexicon& lexicon);

/// Rule-based exact translator for the synthetic language: word-by-word
/// lexicon lookup followed by swap_adjacent_pairs. Each position carries
/// (1 - alpha) on the chosen word plus alpha spread uniformly over all
/// distinct target words. Any unknown source word fails the sentence.
class ToyTeacher final : public Teacher {
public:
    ToyTeacher(ToyLexicon lexicon, double alpha);

    std::string id() const override;
    bool provides_distributions() const override { return true; }
    std::optional<TeacherOutput> translate(const std::string& source) const override;

    double alpha() const noexcept { return alpha_; }
    const std::vector<std::string>& target_words() const noexcept { return targets_; }

private:
    ToyLexicon lexicon_;
    double alpha_;
    std::vector<std::string> targets_;
};

} // namespace lrmt::distill
