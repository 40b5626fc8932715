#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "lrmt/model/adamw.hpp"
#include "lrmt/model/student.hpp"

namespace lrmt::model {

struct TrainConfig {
    double lr = 2e-5;
    double weight_decay = 0.01;
    int batch_size = 16;
    long max_steps = 250000;
    long second_round_steps = 500;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    void validate() const;
};

enum class LossKind { Hard, Soft };

/// One teacher-forced pair. `target` excludes BOS and ends with EOS. For
/// soft training `teacher` has one stochastic row per target position over
/// the target vocabulary.
struct TrainingExample {
    std::vector<int> source;
    std::vector<int> target;
    Matrix teacher;
};

struct LossPoint {
    long step = 0;
    double loss = 0.0;
};

using LossCurve = std::vector<LossPoint>;

/// Runs `steps` AdamW updates from a fresh optimizer state. Batches are
/// drawn from per-epoch shuffles seeded by config.seed. Step numbers in the
/// returned curve start at first_step. Throws lrmt::Error naming the step on
/// a non-finite loss.
LossCurve train_steps(StudentModel& model, const std::vector<TrainingExample>& examples,
                      const TrainConfig& config, long steps, LossKind loss, double temperature = 1.0,
                      long first_step = 1);

/// First-round training for config.max_steps steps.
LossCurve train(StudentModel& model, const std::vector<TrainingExample>& examples, const TrainConfig& config,
                LossKind loss = LossKind::Hard, double temperature = 1.0);

/// Second-round fine-tuning for config.second_round_steps steps, continuing
/// from the model's current parameters; step numbers continue after
/// `previous`.
LossCurve finetune(StudentModel& model, const std::vector<TrainingExample>& examples,
                   const TrainConfig& config, const LossCurve& previous = {});

/// Mean loss and gradient of a batch, as used by one training step.
double batch_loss_and_gradient(const StudentModel& model, const std::vector<const TrainingExample*>& batch,
                               LossKind loss, double temperature, Parameters& grads);

/// Greedy-decode token accuracy against example targets: matched positions
/// over target positions (EOS included), position by position.
double token_accuracy(const StudentModel& model, const std::vector<TrainingExample>& examples);

void write_loss_curve(std::ostream& out, const LossCurve& curve);
void save_loss_curve(const std::filesystem::path& path, const LossCurve& curve);
LossCurve load_loss_curve(const std::filesystem::path& path);

} // namespace lrmt::model
