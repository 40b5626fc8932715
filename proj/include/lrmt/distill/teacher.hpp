#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lrmt::distill {

/// Probability mass per target token at one hypothesis position, sorted by
/// token. Tokens absent from the list have probability zero.
using TokenDistribution = std::vector<std::pair<std::string, double>>;

struct TeacherOutput {
    std::vector<std::string> tokens;
    /// One entry per token, or empty when the teacher gives no distributions.
    std::vector<TokenDistribution> distributions;
};

/// A translator whose outputs serve as soft targets. Implementations must be
/// deterministic for a fixed input.
class Teacher {
public:
    virtual ~Teacher() = default;

    virtual std::string id() const = 0;
    virtual bool provides_distributions() const = 0;

    /// std::nullopt (or a thrown lrmt::Error) marks a failure on this
    /// sentence.
    virtual std::optional<TeacherOutput> translate(const std::string& source) const = 0;
};

} // namespace lrmt::distill
