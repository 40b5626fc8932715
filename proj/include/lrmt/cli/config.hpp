#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "lrmt/bench/bench.hpp"
#include "lrmt/corpus/corpus.hpp"
#include "lrmt/distill/experiment.hpp"
#include "lrmt/distill/toy_world.hpp"
#include "lrmt/metrics/bleu.hpp"
#include "lrmt/metrics/chrf.hpp"
#include "lrmt/model/train.hpp"
#include "lrmt/pseudo/eifeler.hpp"

namespace lrmt::cli {

/// Everything a pipeline run can be configured with. On disk this is an INI
/// file with one section per module; see to_ptree for the key names.
struct PipelineConfig {
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";

    std::filesystem::path corpus;
    std::filesystem::path dictionary;
    std::filesystem::path golden;
    std::filesystem::path data_dir;
    std::filesystem::path lexicon;

    corpus::LengthFilterSpec filter;
    std::string corpus_format = "auto";  // auto | jsonl | tsv
    corpus::Side src_side = corpus::Side::Lrl;
    corpus::Side tgt_side = corpus::Side::En;

    pseudo::EifelerRuleConfig eifeler = pseudo::EifelerRuleConfig::standard();
    metrics::BleuConfig bleu;
    metrics::ChrfConfig chrf;
    model::ModelConfig model;
    model::TrainConfig train;

    distill::KdMode kd_mode = distill::KdMode::Sequence;
    double temperature = 1.0;
    double teacher_alpha = 0.0;
    double max_failure_rate = 0.1;

    bench::BenchConfig bench;
    distill::ToyWorldConfig toy;

    /// Copies `seed` into the per-module seeds (model init, batch order, toy
    /// world) as independent derived streams.
    void apply_seed();
    void validate() const;

    distill::ExperimentConfig experiment() const;
};

using Ptree = boost::property_tree::ptree;

/// Throws lrmt::ConfigError on unknown sections or keys and on values that
/// do not parse.
PipelineConfig from_ptree(const Ptree& tree);
Ptree to_ptree(const PipelineConfig& config);

Ptree read_config_tree(const std::filesystem::path& path);

/// Applies one `section.key=value` assignment.
void apply_override(Ptree& tree, const std::string& assignment);

/// Defaults, then the config file (explicit path, else $LRMT_CONFIG when
/// set), then overrides in order.
PipelineConfig resolve_config(const std::optional<std::filesystem::path>& file,
                              const std::vector<std::string>& overrides);

inline constexpr const char* kConfigEnvVar = "LRMT_CONFIG";
inline constexpr const char* kEffectiveConfigFile = "effective_config.ini";

void write_config(std::ostream& out, const PipelineConfig& config);
void save_config(const std::filesystem::path& path, const PipelineConfig& config);

} // namespace lrmt::cli
