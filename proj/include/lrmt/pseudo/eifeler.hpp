#pragma once

#include <set>
#include <string>
#include <string_view>

namespace lrmt::pseudo {

/// Parameters of the Luxembourgish n-deletion rule (Eifeler Regel).
///
/// A word ending in "n" or "nn" loses that ending unless the next word
/// starts with a character in `retain_before`. Before a pause (end of
/// input, or a separator containing one of `pause_marks`) the ending is
/// kept when `retain_at_pause` is set. All comparisons are case-folded.
struct EifelerRuleConfig {
    std::set<char32_t> vowels;
    std::set<char32_t> retain_before;
    std::set<std::string> exceptions;  // case-folded words never modified
    std::set<char32_t> pause_marks;
    bool retain_at_pause = true;

    /// Vowels a e i o u ä ë é ö ü â ê î ô û; retain_before = vowels + n d t z h;
    /// pause marks . ! ? and the ellipsis character.
    static EifelerRuleConfig standard();

    /// Throws lrmt::ConfigError unless retain_before contains every vowel.
    void validate() const;
};

std::string apply_eifeler(std::string_view sentence, const EifelerRuleConfig& config);

} // namespace lrmt::pseudo
