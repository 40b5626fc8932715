#pragma once

#include <filesystem>
#include <iosfwd>

#include "lrmt/model/student.hpp"

namespace lrmt::model {

inline constexpr int kCheckpointVersion = 1;

/// Self-describing JSON checkpoint: format tag, version, model config,
/// both vocabularies and every parameter tensor with its shape (row-major
/// data). Doubles are written with round-trip precision.
void write_checkpoint(std::ostream& out, const StudentModel& model);
void save_checkpoint(const std::filesystem::path& path, const StudentModel& model);

/// Throws lrmt::Error on a missing/unsupported version or shape mismatch.
StudentModel read_checkpoint(std::istream& in);
StudentModel load_checkpoint(const std::filesystem::path& path);

} // namespace lrmt::model
