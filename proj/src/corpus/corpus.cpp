#include "lrmt/corpus/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "lrmt/random.hpp"
#include "lrmt/text/utf8.hpp"

namespace lrmt::corpus {

namespace {

bool has_line_break(const std::string& s) {
    return s.find_first_of("\r\n") != std::string::npos;
}

std::optional<std::string> normalize_side(std::string value, std::size_t line, const char* key) {
    if (value.empty())
        return std::nullopt;
    if (has_line_break(value))
        throw FormatError(line, std::string("side '") + key + "' contains a line break");
    text::decode(value);  // validates UTF-8
    return value;
}

std::optional<std::string> json_side(const nlohmann::json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        throw FormatError(line, std::string("field '") + key + "' is not a string");
    return normalize_side(it->get<std::string>(), line, key);
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cols.push_back(line.substr(start));
            return cols;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

ParallelRecord parse_jsonl_line(const std::string& line, std::size_t lineno) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object())
        throw FormatError(lineno, "expected a JSON object");
    ParallelRecord rec;
    if (auto it = obj.find("id"); it != obj.end() && !it->is_null()) {
        if (it->is_string())
            rec.id = it->get<std::string>();
        else if (it->is_number_integer())
            rec.id = std::to_string(it->get<long long>());
        else
            throw FormatError(lineno, "field 'id' must be a string or integer");
    } else {
        rec.id = std::to_string(lineno - 1);
    }
    rec.lrl = json_side(obj, "lb", lineno);
    rec.hrl = json_side(obj, "de", lineno);
    rec.en = json_side(obj, "en", lineno);
    return rec;
}

ParallelRecord parse_tsv_line(const std::string& line, std::size_t lineno) {
    const auto cols = split_tabs(line);
    if (cols.size() != 4)
        throw FormatError(lineno, "expected 4 tab-separated columns, got " + std::to_string(cols.size()));
    ParallelRecord rec;
    rec.id = cols[0].empty() ? std::to_string(lineno - 1) : cols[0];
    rec.lrl = normalize_side(cols[1], lineno, "lrl");
    rec.hrl = normalize_side(cols[2], lineno, "hrl");
    rec.en = normalize_side(cols[3], lineno, "en");
    return rec;
}

} // namespace

const char* side_key(Side side) {
    switch (side) {
    case Side::Lrl: return "lb";
    case Side::Hrl: return "de";
    case Side::En: return "en";
    }
    return "?";
}

Side parse_side(const std::string& name) {
    if (name == "lb" || name == "lrl")
        return Side::Lrl;
    if (name == "de" || name == "hrl")
        return Side::Hrl;
    if (name == "en")
        return Side::En;
    throw ConfigError("unknown corpus side '" + name + "' (expected lb|de|en)");
}

const std::optional<std::string>& ParallelRecord::side(Side s) const {
    switch (s) {
    case Side::Lrl: return lrl;
    case Side::Hrl: return hrl;
    case Side::En: break;
    }
    return en;
}

std::optional<std::string>& ParallelRecord::side(Side s) {
    return const_cast<std::optional<std::string>&>(std::as_const(*this).side(s));
}

Format parse_format(const std::string& name) {
    if (name == "jsonl")
        return Format::Jsonl;
    if (name == "tsv")
        return Format::Tsv;
    throw ConfigError("unknown corpus format '" + name + "' (expected jsonl|tsv)");
}

Format format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".tsv" ? Format::Tsv : Format::Jsonl;
}

FormatError::FormatError(std::size_t line, const std::string& what)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

Corpus read_corpus(std::istream& in, Format format) {
    Corpus records;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            throw FormatError(lineno, "empty line");
        auto rec = format == Format::Jsonl ? parse_jsonl_line(line, lineno) : parse_tsv_line(line, lineno);
        if (!rec.has_any_side())
            throw FormatError(lineno, "no sides present");
        if (!ids.insert(rec.id).second)
            throw FormatError(lineno, "duplicate id '" + rec.id + "'");
        records.push_back(std::move(rec));
    }
    return records;
}

Corpus load_corpus(const std::filesystem::path& path, Format format) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open corpus file " + path.string());
    return read_corpus(in, format);
}

void write_corpus(std::ostream& out, const Corpus& records, Format format) {
    for (const auto& rec : records) {
        if (!rec.has_any_side())
            throw Error("record '" + rec.id + "' has no sides");
        if (format == Format::Jsonl) {
            nlohmann::ordered_json obj;
            obj["id"] = rec.id;
            for (Side s : kAllSides)
                if (const auto& v = rec.side(s))
                    obj[side_key(s)] = *v;
            out << obj.dump() << '\n';
        } else {
            auto field = [&](const std::optional<std::string>& v) -> const std::string& {
                static const std::string empty;
                if (v && v->find_first_of("\t\r\n") != std::string::npos)
                    throw Error("record '" + rec.id + "' contains a tab or line break; not representable as TSV");
                return v ? *v : empty;
            };
            if (rec.id.find_first_of("\t\r\n") != std::string::npos)
                throw Error("record id '" + rec.id + "' not representable as TSV");
            out << rec.id << '\t' << field(rec.lrl) << '\t' << field(rec.hrl) << '\t' << field(rec.en)
                << '\n';
        }
    }
}

void save_corpus(const std::filesystem::path& path, const Corpus& records, Format format) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write corpus file " + path.string());
    write_corpus(out, records, format);
}

void LengthFilterSpec::validate() const {
    if (min_chars == 0 || min_chars > max_chars)
        throw ConfigError("length filter requires 0 < min_chars <= max_chars (got " +
                          std::to_string(min_chars) + ", " + std::to_string(max_chars) + ")");
}

FilterResult filter_by_length(const Corpus& records, const LengthFilterSpec& spec) {
    spec.validate();
    FilterResult result;
    for (const auto& rec : records) {
        bool missing = false;
        bool in_bounds = true;
        auto check = [&](const std::optional<std::string>& v) {
            if (!v) {
                missing = true;
                return;
            }
            const auto n = text::scalar_count(*v);
            if (n < spec.min_chars || n > spec.max_chars)
                in_bounds = false;
        };
        if (spec.sides.empty()) {
            for (Side s : kAllSides)
                if (rec.side(s))
                    check(rec.side(s));
        } else {
            for (Side s : spec.sides)
                check(rec.side(s));
        }
        if (missing)
            ++result.dropped_missing_side;
        else if (!in_bounds)
            ++result.dropped_length;
        else
            result.kept.push_back(rec);
    }
    return result;
}

CorpusSplit split_corpus(const Corpus& records, const SplitFractions& f, std::uint64_t seed) {
    if (!(f.train > 0 && f.dev > 0 && f.test > 0))
        throw ConfigError("split fractions must be positive");
    if (std::abs(f.train + f.dev + f.test - 1.0) > 1e-9)
        throw ConfigError("split fractions must sum to 1");
    const std::size_t n = records.size();
    if (n < 3)
        throw Error("cannot split fewer than 3 records (got " + std::to_string(n) + ")");

    std::size_t n_train = static_cast<std::size_t>(std::llround(f.train * static_cast<double>(n)));
    std::size_t n_dev = static_cast<std::size_t>(std::llround(f.dev * static_cast<double>(n)));
    n_train = std::min(n_train, n);
    n_dev = std::min(n_dev, n - n_train);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    auto take = [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                     order.begin() + static_cast<std::ptrdiff_t>(end));
        std::sort(idx.begin(), idx.end());
        Corpus part;
        part.reserve(idx.size());
        for (auto i : idx)
            part.push_back(records[i]);
        return part;
    };
    CorpusSplit split;
    split.train = take(0, n_train);
    split.dev = take(n_train, n_train + n_dev);
    split.test = take(n_train + n_dev, n);
    return split;
}

CorpusStats corpus_stats(const Corpus& records) {
    CorpusStats stats;
    stats.record_count = records.size();
    for (Side s : kAllSides)
        stats.sides[s] = {};
    std::map<Side, std::set<std::string>> vocab;
    for (const auto& rec : records) {
        for (Side s : kAllSides) {
            const auto& v = rec.side(s);
            if (!v)
                continue;
            auto& side = stats.sides[s];
            ++side.present;
            ++side.length_histogram[text::scalar_count(*v)];
            std::istringstream words(*v);
            std::string w;
            while (words >> w)
                vocab[s].insert(w);
        }
    }
    for (auto& [s, words] : vocab)
        stats.sides[s].vocabulary_size = words.size();
    return stats;
}

} // namespace lrmt::corpus
