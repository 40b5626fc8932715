#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrmt/metrics/bleu.hpp"
#include "lrmt/metrics/chrf.hpp"
#include "lrmt/model/train.hpp"
#include "lrmt/pseudo/eifeler.hpp"

namespace lrmt::distill {

enum class KdMode { Sequence, Token };

KdMode parse_kd_mode(const std::string& name);
const char* kd_mode_name(KdMode mode);

struct ExperimentConfig {
    std::uint64_t seed = 0;  // top-level seed the model and train seeds derive from; for provenance
    model::ModelConfig model;
    model::TrainConfig train;
    KdMode kd_mode = KdMode::Sequence;
    double temperature = 1.0;
    double teacher_alpha = 0.0;
    double max_failure_rate = 0.1;
    pseudo::EifelerRuleConfig rule = pseudo::EifelerRuleConfig::standard();
    metrics::BleuConfig bleu;
    metrics::ChrfConfig chrf;

    void validate() const;
};

struct ExperimentRow {
    std::string data;  // pseudo | distilled | ground-truth
    bool finetuned = false;
    /// BLEU and chrF++ on test set A, then on test set B.
    std::array<double, 4> scores{};
    /// BLEU of the student's test-A output against the teacher's output.
    double teacher_agreement_bleu = 0.0;
    double final_loss = 0.0;

    std::string label() const;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::size_t train_pairs = 0;
    std::size_t finetune_pairs = 0;
    std::size_t test_a_pairs = 0;
    std::size_t test_b_pairs = 0;
    std::size_t teacher_failures = 0;
    std::string teacher;
    ExperimentConfig config;

    const ExperimentRow& row(const std::string& data, bool finetuned) const;
};

inline constexpr std::array<const char*, 4> kReportColumns = {"test_a BLEU", "test_a chrF++", "test_b BLEU",
                                                              "test_b chrF++"};

/// Trains pseudo, distilled and ground-truth students on the toy corpora in
/// `data_dir`, each scored before and after second-round fine-tuning.
/// Throws lrmt::Error naming the first missing input file. When
/// `artifact_dir` is given, loss curves and test translations are written
/// there.
ExperimentReport kd_experiment(const std::filesystem::path& data_dir, const ExperimentConfig& config,
                               const std::optional<std::filesystem::path>& artifact_dir = std::nullopt);

nlohmann::ordered_json to_json(const ExperimentReport& report);
void write_report_markdown(std::ostream& out, const ExperimentReport& report);
/// report.md and report.json in `dir`.
void save_report(const std::filesystem::path& dir, const ExperimentReport& report);

} // namespace lrmt::distill
