#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lrmt::metrics {

/// One committed reference-scorer result: {hyp, ref, bleu, chrfpp, version}.
struct GoldenVector {
    std::string hyp;
    std::string ref;
    double bleu = 0.0;
    double chrfpp = 0.0;
    std::string version;
};

/// Throws lrmt::Error on malformed records, scores outside [0, 100] or an
/// empty version string.
std::vector<GoldenVector> load_golden_vectors(const std::filesystem::path& path);

} // namespace lrmt::metrics
