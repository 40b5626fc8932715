#include "lrmt/pseudo/dictionary.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "lrmt/error.hpp"
#include "lrmt/text/utf8.hpp"

namespace lrmt::pseudo {

namespace {

std::string at_line(std::size_t line) {
    return line ? "line " + std::to_string(line) + ": " : std::string();
}

bool has_space(std::string_view s) {
    for (char32_t cp : text::decode(s))
        if (text::is_split_space(cp))
            return true;
    return false;
}

} // namespace

void BilingualDictionary::insert(std::string_view hrl, std::string_view lrl, std::size_t line) {
    if (hrl.empty() || lrl.empty())
        throw Error(at_line(line) + "empty dictionary field");
    if (has_space(hrl) || has_space(lrl))
        throw Error(at_line(line) + "dictionary entries must be single whitespace-free words");
    auto key = text::casefold(hrl);
    auto [it, inserted] = entries_.try_emplace(key, Entry{std::string(lrl), line});
    if (!inserted)
        throw Error("duplicate dictionary key '" + key + "' on lines " + std::to_string(it->second.line) +
                    " and " + std::to_string(line));
}

std::optional<std::string_view> BilingualDictionary::lookup(std::string_view word) const {
    auto it = entries_.find(text::casefold(word));
    if (it == entries_.end())
        return std::nullopt;
    return std::string_view(it->second.lrl);
}

std::vector<std::pair<std::string, std::string>> BilingualDictionary::sorted_entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(entries_.size());
    for (const auto& [k, e] : entries_)
        out.emplace_back(k, e.lrl);
    std::sort(out.begin(), out.end());
    return out;
}

BilingualDictionary read_dictionary(std::istream& in) {
    BilingualDictionary dict;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            if (line.empty())
                throw Error(at_line(lineno) + "empty dictionary field");
            throw Error(at_line(lineno) + "expected 'hrl<TAB>lrl'");
        }
        dict.insert(std::string_view(line).substr(0, tab), std::string_view(line).substr(tab + 1), lineno);
    }
    return dict;
}

BilingualDictionary build_dictionary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open dictionary " + path.string());
    return read_dictionary(in);
}

void write_dictionary(std::ostream& out, const BilingualDictionary& dict) {
    for (const auto& [k, v] : dict.sorted_entries())
        out << k << '\t' << v << '\n';
}

} // namespace lrmt::pseudo
