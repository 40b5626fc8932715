#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lrmt::pseudo {

/// Single-sense HRL -> LRL word lexicon. Keys are stored case-folded, so
/// lookup is case-insensitive on the HRL side.
class BilingualDictionary {
public:
    /// Throws lrmt::Error if the case-folded key already exists or either
    /// side is empty or contains whitespace. `line` is only used in messages.
    void insert(std::string_view hrl, std::string_view lrl, std::size_t line = 0);

    std::optional<std::string_view> lookup(std::string_view word) const;

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    /// Entries sorted by case-folded key.
    std::vector<std::pair<std::string, std::string>> sorted_entries() const;

private:
    struct Entry {
        std::string lrl;
        std::size_t line;
    };
    std::unordered_map<std::string, Entry> entries_;
};

/// Reads `hrl<TAB>lrl` lines.
BilingualDictionary read_dictionary(std::istream& in);
BilingualDictionary build_dictionary(const std::filesystem::path& path);

void write_dictionary(std::ostream& out, const BilingualDictionary& dict);

} // namespace lrmt::pseudo
