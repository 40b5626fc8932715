#include "lrmt/distill/distill.hpp"

#include "lrmt/error.hpp"

namespace lrmt::distill {

using model::TrainingExample;
using model::Vocabulary;

namespace {

TrainingExample base_example(const model::StudentModel& student, const SoftTargetRecord& r) {
    validate_record(r);
    TrainingExample ex;
    ex.source = model::encode_source(student, r.source);
    for (const auto& tok : r.hypothesis)
        ex.target.push_back(student.tgt_vocab.index(tok));
    ex.target.push_back(Vocabulary::kEos);
    return ex;
}

} // namespace

std::vector<TrainingExample> sequence_examples(const model::StudentModel& student,
                                               const std::vector<SoftTargetRecord>& records) {
    std::vector<TrainingExample> out;
    out.reserve(records.size());
    for (const auto& r : records)
        out.push_back(base_example(student, r));
    return out;
}

std::vector<TrainingExample> token_examples(const model::StudentModel& student,
                                            const std::vector<SoftTargetRecord>& records) {
    std::vector<TrainingExample> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (!r.distributions)
            throw Error("token-level distillation: record '" + r.id + "' has no teacher distributions");
        auto ex = base_example(student, r);
        const auto rows = static_cast<Eigen::Index>(ex.target.size());
        ex.teacher = model::Matrix::Zero(rows, student.tgt_vocab.size());
        for (std::size_t t = 0; t < r.distributions->size(); ++t)
            for (const auto& [tok, p] : (*r.distributions)[t])
                ex.teacher(static_cast<Eigen::Index>(t), student.tgt_vocab.index(tok)) += p;
        ex.teacher(rows - 1, Vocabulary::kEos) = 1.0;
        out.push_back(std::move(ex));
    }
    return out;
}

model::LossCurve distill_sequence_level(model::StudentModel& student, const std::vector<SoftTargetRecord>& records,
                                        const model::TrainConfig& config) {
    if (records.empty())
        throw Error("distill_sequence_level: no soft-target records");
    return model::train(student, sequence_examples(student, records), config, model::LossKind::Hard);
}

model::LossCurve distill_token_level(model::StudentModel& student, const std::vector<SoftTargetRecord>& records,
                                     double temperature, const model::TrainConfig& config) {
    if (records.empty())
        throw Error("distill_token_level: no soft-target records");
    return model::train(student, token_examples(student, records), config, model::LossKind::Soft, temperature);
}

} // namespace lrmt::distill
