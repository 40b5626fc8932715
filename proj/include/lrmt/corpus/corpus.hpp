#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrmt/error.hpp"

namespace lrmt::corpus {

/// Record sides. On disk they are keyed lb / de / en (JSONL) or by column
/// position (TSV: id, lrl, hrl, en).
enum class Side { Lrl, Hrl, En };

inline constexpr std::array<Side, 3> kAllSides = {Side::Lrl, Side::Hrl, Side::En};

const char* side_key(Side side);
Side parse_side(const std::string& name);

/// One sentence triple. At least one side is present; no side contains a
/// line break.
struct ParallelRecord {
    std::string id;
    std::optional<std::string> lrl;
    std::optional<std::string> hrl;
    std::optional<std::string> en;

    const std::optional<std::string>& side(Side s) const;
    std::optional<std::string>& side(Side s);
    bool has_any_side() const { return lrl || hrl || en; }

    friend bool operator==(const ParallelRecord&, const ParallelRecord&) = default;
};

using Corpus = std::vector<ParallelRecord>;

enum class Format { Jsonl, Tsv };

Format parse_format(const std::string& name);
Format format_from_path(const std::filesystem::path& path);

/// Malformed corpus input. `line()` is 1-based, 0 when not line-specific.
class FormatError : public Error {
public:
    FormatError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

Corpus read_corpus(std::istream& in, Format format);
Corpus load_corpus(const std::filesystem::path& path, Format format);

void write_corpus(std::ostream& out, const Corpus& records, Format format);
void save_corpus(const std::filesystem::path& path, const Corpus& records, Format format);

struct LengthFilterSpec {
    std::size_t min_chars = 50;
    std::size_t max_chars = 500;
    /// Sides the bound applies to. Empty means every side present in the
    /// record.
    std::vector<Side> sides;

    void validate() const;
};

struct FilterResult {
    Corpus kept;
    std::size_t dropped_missing_side = 0;
    std::size_t dropped_length = 0;
};

/// Keeps records whose filtered sides all have min_chars <= n <= max_chars,
/// where n counts Unicode scalar values of the whole sentence.
FilterResult filter_by_length(const Corpus& records, const LengthFilterSpec& spec);

struct SplitFractions {
    double train = 0.8;
    double dev = 0.1;
    double test = 0.1;
};

struct CorpusSplit {
    Corpus train;
    Corpus dev;
    Corpus test;
};

CorpusSplit split_corpus(const Corpus& records, const SplitFractions& fractions, std::uint64_t seed);

struct SideStats {
    std::size_t present = 0;
    std::map<std::size_t, std::size_t> length_histogram;  // chars -> records
    std::size_t vocabulary_size = 0;                      // distinct whitespace tokens
};

struct CorpusStats {
    std::size_t record_count = 0;
    std::map<Side, SideStats> sides;
};

CorpusStats corpus_stats(const Corpus& records);

} // namespace lrmt::corpus
