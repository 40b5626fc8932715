#include "lrmt/model/train.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "lrmt/error.hpp"
#include "lrmt/model/loss.hpp"
#include "lrmt/random.hpp"

namespace lrmt::model {

void TrainConfig::validate() const {
    if (!(lr > 0))
        throw ConfigError("train: lr must be > 0");
    if (!(weight_decay >= 0))
        throw ConfigError("train: weight_decay must be >= 0");
    if (batch_size < 1)
        throw ConfigError("train: batch_size must be >= 1");
    if (max_steps < 0 || second_round_steps < 0)
        throw ConfigError("train: step counts must be >= 0");
}

namespace {

std::vector<int> teacher_input(const std::vector<int>& target) {
    std::vector<int> in;
    in.reserve(target.size());
    in.push_back(Vocabulary::kBos);
    in.insert(in.end(), target.begin(), target.end() - 1);
    return in;
}

} // namespace

double batch_loss_and_gradient(const StudentModel& model, const std::vector<const TrainingExample*>& batch,
                               LossKind loss, double temperature, Parameters& grads) {
    std::size_t positions = 0;
    for (const auto* ex : batch)
        positions += ex->target.size();
    if (positions == 0)
        throw Error("training batch has no target positions");
    const double inv_n = 1.0 / static_cast<double>(positions);

    double total = 0.0;
    for (const auto* ex : batch) {
        if (ex->target.empty() || ex->target.back() != Vocabulary::kEos)
            throw Error("training target must end with EOS");
        const auto in = teacher_input(ex->target);
        const auto cache = forward_cached(model, ex->source, in);
        Matrix dz;
        if (loss == LossKind::Hard) {
            dz = cache.probs;
            for (std::size_t t = 0; t < ex->target.size(); ++t) {
                const auto r = static_cast<Eigen::Index>(t);
                total -= std::log(cache.probs(r, ex->target[t]));
                dz(r, ex->target[t]) -= 1.0;
            }
        } else {
            if (ex->teacher.rows() != static_cast<Eigen::Index>(ex->target.size()) ||
                ex->teacher.cols() != cache.probs.cols())
                throw Error("soft training example lacks a teacher distribution of matching shape");
            const Matrix p = softmax_rows(cache.logits, temperature);
            const Matrix q = temper_rows(ex->teacher, temperature);
            for (Eigen::Index t = 0; t < p.rows(); ++t)
                for (Eigen::Index v = 0; v < p.cols(); ++v)
                    if (q(t, v) != 0)
                        total -= q(t, v) * std::log(p(t, v));
            dz = p - q;
            if (temperature != 1.0)
                dz /= temperature;
        }
        dz *= inv_n;
        backward(model, cache, dz, grads);
    }
    return total * inv_n;
}

LossCurve train_steps(StudentModel& model, const std::vector<TrainingExample>& examples,
                      const TrainConfig& config, long steps, LossKind loss, double temperature, long first_step) {
    config.validate();
    if (!(temperature > 0))
        throw ConfigError("train: temperature must be > 0");
    if (examples.empty())
        throw Error("train: empty training set");
    if (loss == LossKind::Soft)
        for (std::size_t i = 0; i < examples.size(); ++i)
            if (examples[i].teacher.rows() == 0)
                throw Error("train: soft loss requires teacher distributions (example " + std::to_string(i) + ")");

    LossCurve curve;
    if (steps == 0)
        return curve;
    curve.reserve(static_cast<std::size_t>(steps));

    auto state = OptimizerState<Scalar>::for_params(model.params);
    state.beta1 = config.beta1;
    state.beta2 = config.beta2;
    state.eps = config.eps;

    Rng rng(config.seed);
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t cursor = order.size();

    Parameters grads = model.params.zeros_like();
    std::vector<const TrainingExample*> batch;
    for (long s = 0; s < steps; ++s) {
        batch.clear();
        for (int b = 0; b < config.batch_size; ++b) {
            if (cursor == order.size()) {
                rng.shuffle(order);
                cursor = 0;
            }
            batch.push_back(&examples[order[cursor++]]);
        }
        grads.set_zero();
        const double value = batch_loss_and_gradient(model, batch, loss, temperature, grads);
        const long step = first_step + s;
        if (!std::isfinite(value))
            throw Error("training diverged: non-finite loss at step " + std::to_string(step));
        adamw_step(model.params, grads, state, config.lr, config.weight_decay);
        if (!model.params.all_finite())
            throw Error("training diverged: non-finite parameters after step " + std::to_string(step));
        curve.push_back({step, value});
    }
    return curve;
}

LossCurve train(StudentModel& model, const std::vector<TrainingExample>& examples, const TrainConfig& config,
                LossKind loss, double temperature) {
    return train_steps(model, examples, config, config.max_steps, loss, temperature, 1);
}

LossCurve finetune(StudentModel& model, const std::vector<TrainingExample>& examples, const TrainConfig& config,
                   const LossCurve& previous) {
    const long first = previous.empty() ? 1 : previous.back().step + 1;
    return train_steps(model, examples, config, config.second_round_steps, LossKind::Hard, 1.0, first);
}

double token_accuracy(const StudentModel& model, const std::vector<TrainingExample>& examples) {
    std::size_t total = 0;
    std::size_t hit = 0;
    for (const auto& ex : examples) {
        const auto out = greedy_decode(model, ex.source, static_cast<int>(ex.target.size()));
        for (std::size_t t = 0; t < ex.target.size(); ++t) {
            ++total;
            if (t < out.size() && out[t] == ex.target[t])
                ++hit;
        }
    }
    return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

void write_loss_curve(std::ostream& out, const LossCurve& curve) {
    out << "step,loss\n";
    char buf[64];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof buf, "%.17g", p.loss);
        out << p.step << ',' << buf << '\n';
    }
}

void save_loss_curve(const std::filesystem::path& path, const LossCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write loss curve " + path.string());
    write_loss_curve(out, curve);
}

LossCurve load_loss_curve(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open loss curve " + path.string());
    LossCurve curve;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (number == 1) {
            if (line != "step,loss")
                throw Error("loss curve " + path.string() + ": missing step,loss header");
            continue;
        }
        if (line.empty())
            continue;
        LossPoint p;
        if (std::sscanf(line.c_str(), "%ld,%lf", &p.step, &p.loss) != 2)
            throw Error("loss curve " + path.string() + " line " + std::to_string(number) + ": malformed");
        curve.push_back(p);
    }
    return curve;
}

} // namespace lrmt::model
