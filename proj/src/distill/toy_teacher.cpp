#include "lrmt/distill/toy_teacher.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "lrmt/error.hpp"
#include "lrmt/model/vocabulary.hpp"

namespace lrmt::distill {

std::vector<std::string> swap_adjacent_pairs(std::vector<std::string> tokens) {
    for (std::size_t i = 0; i + 1 < tokens.size(); i += 2)
        std::swap(tokens[i], tokens[i + 1]);
    return tokens;
}

ToyLexicon read_toy_lexicon(std::istream& in) {
    ToyLexicon lexicon;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty())
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw Error("teacher lexicon line " + std::to_string(number) + ": expected surface<TAB>target");
        auto surface = line.substr(0, tab);
        auto target = line.substr(tab + 1);
        if (surface.empty() || target.empty())
            throw Error("teacher lexicon line " + std::to_string(number) + ": empty field");
        if (!lexicon.emplace(surface, target).second)
            throw Error("teacher lexicon line " + std::to_string(number) + ": duplicate surface form '" + surface +
                        "'");
    }
    return lexicon;
}

ToyLexicon load_toy_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open teacher lexicon " + path.string());
    return read_toy_lexicon(in);
}

void write_toy_lexicon(std::ostream& out, const ToyLexicon& lexicon) {
    for (const auto& [surface, target] : lexicon)
        out << surface << '\t' << target << '\n';
}

ToyTeacher::ToyTeacher(ToyLexicon lexicon, double alpha) : lexicon_(std::move(lexicon)), alpha_(alpha) {
    if (!(alpha_ >= 0.0 && alpha_ < 0.5))
        throw ConfigError("toy teacher: alpha must be in [0, 0.5)");
    if (lexicon_.empty())
        throw ConfigError("toy teacher: empty lexicon");
    std::set<std::string> targets;
    for (const auto& [surface, target] : lexicon_)
        targets.insert(target);
    targets_.assign(targets.begin(), targets.end());
}

std::string ToyTeacher::id() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "toy-teacher(alpha=%g)", alpha_);
    return buf;
}

std::optional<TeacherOutput> ToyTeacher::translate(const std::string& source) const {
    std::vector<std::string> words;
    for (const auto& w : model::split_words(source)) {
        const auto it = lexicon_.find(w);
        if (it == lexicon_.end())
            return std::nullopt;
        words.push_back(it->second);
    }
    if (words.empty())
        return std::nullopt;
    TeacherOutput out;
    out.tokens = swap_adjacent_pairs(std::move(words));
    const double spread = alpha_ / static_cast<double>(targets_.size());
    for (const auto& tok : out.tokens) {
        TokenDistribution row;
        if (alpha_ == 0.0) {
            row.emplace_back(tok, 1.0);
        } else {
            row.reserve(targets_.size());
            for (const auto& t : targets_)
                row.emplace_back(t, t == tok ? 1.0 - alpha_ + spread : spread);
        }
        out.distributions.push_back(std::move(row));
    }
    return out;
}

} // namespace lrmt::distill
