#pragma once

#include <vector>

#include "lrmt/distill/soft_targets.hpp"
#include "lrmt/model/train.hpp"

namespace lrmt::distill {

/// (source, teacher hypothesis) pairs with hard targets.
std::vector<model::TrainingExample> sequence_examples(const model::StudentModel& student,
                                                      const std::vector<SoftTargetRecord>& records);

/// As sequence_examples, plus one teacher row per hypothesis token mapped
/// into the student's target vocabulary (unknown tokens to UNK) and a
/// one-hot EOS row. Throws lrmt::Error naming a record without
/// distributions.
std::vector<model::TrainingExample> token_examples(const model::StudentModel& student,
                                                   const std::vector<SoftTargetRecord>& records);

/// Cross-entropy training on the teacher's hypotheses.
model::LossCurve distill_sequence_level(model::StudentModel& student, const std::vector<SoftTargetRecord>& records,
                                        const model::TrainConfig& config);

/// Soft-target training against the teacher's distributions at temperature T.
model::LossCurve distill_token_level(model::StudentModel& student, const std::vector<SoftTargetRecord>& records,
                                     double temperature, const model::TrainConfig& config);

} // namespace lrmt::distill
