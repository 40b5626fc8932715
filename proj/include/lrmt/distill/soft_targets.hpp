#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lrmt/distill/teacher.hpp"

namespace lrmt::distill {

/// One line of a soft-target file:
/// {"id", "src", "hyp": [tokens], "dist": [{token: p}, ...]?, "teacher"}.
struct SoftTargetRecord {
    std::string id;
    std::string source;
    std::vector<std::string> hypothesis;
    std::optional<std::vector<TokenDistribution>> distributions;
    std::string teacher;

    friend bool operator==(const SoftTargetRecord&, const SoftTargetRecord&) = default;
};

/// Throws lrmt::Error naming the record if the hypothesis is empty or a
/// distribution row is not stochastic within 1e-4 or the row count differs
/// from the hypothesis length.
void validate_record(const SoftTargetRecord& record);

std::vector<SoftTargetRecord> read_soft_targets(std::istream& in);
std::vector<SoftTargetRecord> load_soft_targets(const std::filesystem::path& path);
void write_soft_targets(std::ostream& out, const std::vector<SoftTargetRecord>& records);
void save_soft_targets(const std::filesystem::path& path, const std::vector<SoftTargetRecord>& records);

struct SourceSentence {
    std::string id;
    std::string text;
};

struct GenerationResult {
    std::vector<SoftTargetRecord> records;
    std::vector<std::string> failed_ids;
    double seconds = 0.0;
    double sentences_per_second = 0.0;
};

/// Runs the teacher over every source in order. Failures and empty
/// hypotheses are skipped and logged; more than max_failure_rate of the
/// sources failing is a run-level lrmt::Error.
GenerationResult generate_soft_targets(const Teacher& teacher, const std::vector<SourceSentence>& sources,
                                       double max_failure_rate = 0.1);

} // namespace lrmt::distill
