#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lrmt/model/adamw.hpp"
#include "lrmt/model/checkpoint.hpp"
#include "lrmt/model/loss.hpp"
#include "lrmt/model/train.hpp"
#include "support/model_oracles.hpp"

using namespace lrmt::model;
using lrmt::testing::copy_model;
using lrmt::testing::copy_task;
using lrmt::testing::copy_train_config;
using lrmt::testing::numbered_vocab;
using lrmt::testing::probe_batch;
using lrmt::testing::probe_model;

namespace {

std::vector<const TrainingExample*> pointers(const std::vector<TrainingExample>& ex) {
    std::vector<const TrainingExample*> out;
    for (const auto& e : ex)
        out.push_back(&e);
    return out;
}

std::vector<int> tgt_input(const TrainingExample& ex) {
    std::vector<int> in = {Vocabulary::kBos};
    in.insert(in.end(), ex.target.begin(), ex.target.end() - 1);
    return in;
}

Parameters single_scalar(double value) {
    Parameters p;
    for (auto* t : p.tensors())
        t->setZero(1, 1);
    p.src_embed(0, 0) = value;
    return p;
}

} // namespace

TEST(Vocabulary, ReservedTokensAndUnknowns) {
    const auto v = Vocabulary::from_sentences({"b a", "c a"});
    EXPECT_EQ(v.size(), 7);
    EXPECT_EQ(v.token(Vocabulary::kEos), "</s>");
    EXPECT_EQ(v.index("a"), 4);
    EXPECT_EQ(v.index("zzz"), Vocabulary::kUnk);
    EXPECT_EQ(v.decode({4, 1, 5, 2, 6}), "a b");
    EXPECT_THROW(Vocabulary::from_tokens({"a", "b"}), lrmt::Error);
}

TEST(Forward, RowsAreStochasticAndDeterministic) {
    const auto m = probe_model();
    const std::vector<int> src = {4, 5, 6, 2};
    const std::vector<int> tgt = {1, 7, 8};
    const Matrix a = forward(m, src, tgt);
    const Matrix b = forward(m, src, tgt);
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.rows(), 3);
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        EXPECT_NEAR(a.row(r).sum(), 1.0, 1e-6);
}

TEST(Forward, ZeroProjectionGivesUniform) {
    auto m = probe_model();
    m.params.proj_w.setZero();
    m.params.proj_b.setZero();
    const Matrix p = forward(m, std::vector<int>{4, 2}, std::vector<int>{1, 5});
    for (Eigen::Index i = 0; i < p.size(); ++i)
        EXPECT_DOUBLE_EQ(p.data()[i], 1.0 / 16);
}

TEST(Forward, RejectsOutOfRangeIndicesAndOverlongInput) {
    const auto m = probe_model();
    EXPECT_THROW(forward(m, std::vector<int>{99}, std::vector<int>{1}), lrmt::Error);
    EXPECT_THROW(forward(m, std::vector<int>{4}, std::vector<int>{-1}), lrmt::Error);
    EXPECT_THROW(forward(m, std::vector<int>(13, 4), std::vector<int>{1}), lrmt::Error);
}

TEST(Loss, CrossEntropyAnalyticCases) {
    const std::vector<std::uint8_t> active = {1, 1};
    Matrix uniform = Matrix::Constant(2, 8, 1.0 / 8);
    EXPECT_NEAR(cross_entropy_loss(uniform, std::vector<int>{3, 5}, active), std::log(8.0), 1e-15);
    EXPECT_NEAR(std::log(8.0), 2.0794, 1e-4);
    Matrix onehot = Matrix::Zero(2, 8);
    onehot(0, 3) = onehot(1, 5) = 1;
    EXPECT_EQ(cross_entropy_loss(onehot, std::vector<int>{3, 5}, active), 0.0);
    EXPECT_THROW(cross_entropy_loss(uniform, std::vector<int>{3, 5}, std::vector<std::uint8_t>{0, 0}), lrmt::Error);
}

TEST(Loss, CrossEntropyMatchesDirectSummation) {
    lrmt::Rng rng(4);
    Matrix p(5, 6);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        p.data()[i] = rng.uniform(0.1, 1.0);
    for (Eigen::Index r = 0; r < 5; ++r)
        p.row(r) /= p.row(r).sum();
    const std::vector<int> gold = {0, 5, 2, 2, 1};
    const std::vector<std::uint8_t> active = {1, 0, 1, 1, 0};
    const double direct = -(std::log(p(0, 0)) + std::log(p(2, 2)) + std::log(p(3, 2))) / 3.0;
    EXPECT_NEAR(cross_entropy_loss(p, gold, active), direct, 1e-14);
}

TEST(Loss, SoftTargetAgainstItselfIsEntropyAndMinimal) {
    lrmt::Rng rng(6);
    Matrix p(3, 5);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        p.data()[i] = rng.uniform(0.05, 1.0);
    for (Eigen::Index r = 0; r < 3; ++r)
        p.row(r) /= p.row(r).sum();
    const std::vector<std::uint8_t> active = {1, 1, 1};
    double entropy = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        entropy -= p.data()[i] * std::log(p.data()[i]);
    entropy /= 3;
    const double self = soft_target_loss(p, p, 1.0, active);
    EXPECT_NEAR(self, entropy, 1e-12);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix q = p;
        for (Eigen::Index i = 0; i < q.size(); ++i)
            q.data()[i] *= std::exp(rng.uniform(-0.3, 0.3));
        for (Eigen::Index r = 0; r < 3; ++r)
            q.row(r) /= q.row(r).sum();
        EXPECT_GE(soft_target_loss(q, p, 1.0, active), self - 1e-12);
    }
}

TEST(Loss, SoftTargetOneHotReducesToCrossEntropy) {
    Matrix student(2, 4);
    student << 0.1, 0.2, 0.3, 0.4, 0.25, 0.25, 0.4, 0.1;
    Matrix teacher = Matrix::Zero(2, 4);
    teacher(0, 3) = teacher(1, 2) = 1;
    const std::vector<std::uint8_t> active = {1, 1};
    EXPECT_DOUBLE_EQ(soft_target_loss(student, teacher, 1.0, active),
                     cross_entropy_loss(student, std::vector<int>{3, 2}, active));
}

TEST(Loss, SoftTargetTemperatureMatchesDirectSummation) {
    Matrix student(1, 3), teacher(1, 3);
    student << 0.5, 0.3, 0.2;
    teacher << 0.7, 0.2, 0.1;
    const double t = 2.0;
    auto temper = [t](const Matrix& m) {
        Matrix out(1, 3);
        for (int c = 0; c < 3; ++c)
            out(0, c) = std::pow(m(0, c), 1.0 / t);
        return Matrix(out / out.sum());
    };
    const Matrix ps = temper(student), pt = temper(teacher);
    double direct = 0;
    for (int c = 0; c < 3; ++c)
        direct -= pt(0, c) * std::log(ps(0, c));
    EXPECT_NEAR(soft_target_loss(student, teacher, t, std::vector<std::uint8_t>{1}), direct, 1e-14);
    Matrix bad = teacher;
    bad(0, 0) += 1e-3;
    EXPECT_THROW(soft_target_loss(student, bad, t, std::vector<std::uint8_t>{1}), lrmt::Error);
}

TEST(Backward, HardLossMatchesFiniteDifference) {
    const auto m = probe_model();
    const auto check = lrmt::testing::finite_difference_check(m, probe_batch(m, false), LossKind::Hard, 1.0);
    EXPECT_EQ(check.checked, m.params.size());
    EXPECT_LE(check.max_relative_error, 1e-4) << check.worst_tensor;
}

TEST(Backward, SoftLossMatchesFiniteDifference) {
    const auto m = probe_model(8);
    for (double t : {1.0, 2.0}) {
        const auto check = lrmt::testing::finite_difference_check(m, probe_batch(m, true), LossKind::Soft, t);
        EXPECT_LE(check.max_relative_error, 1e-4) << check.worst_tensor << " at T=" << t;
    }
}

TEST(Backward, UnusedEmbeddingsGetZeroGradient) {
    const auto m = probe_model();
    TrainingExample ex{{4, 2}, {5, 2}, {}};
    auto grads = m.params.zeros_like();
    batch_loss_and_gradient(m, {&ex}, LossKind::Hard, 1.0, grads);
    for (int tok = 0; tok < m.src_vocab.size(); ++tok)
        if (tok != 4 && tok != 2) {
            EXPECT_TRUE(grads.src_embed.row(tok).isZero(0.0));
        }
    EXPECT_FALSE(grads.src_embed.row(4).isZero(0.0));
}

TEST(Backward, DoublingTheLossDoublesGradients) {
    const auto m = probe_model();
    const auto ex = probe_batch(m, false);
    const auto& e = ex.front();
    const auto cache = forward_cached(m, e.source, tgt_input(e));
    Matrix dz = cache.probs;
    for (std::size_t t = 0; t < e.target.size(); ++t)
        dz(static_cast<Eigen::Index>(t), e.target[t]) -= 1;
    auto once = m.params.zeros_like();
    auto twice = m.params.zeros_like();
    backward(m, cache, dz, once);
    backward(m, cache, Matrix(2 * dz), twice);
    once *= 2.0;
    EXPECT_EQ(once, twice);
}

TEST(Backward, OneHotSoftTargetsGiveIdenticalGradients) {
    const auto m = probe_model();
    auto ex = probe_batch(m, false);
    for (auto& e : ex) {
        e.teacher = Matrix::Zero(static_cast<Eigen::Index>(e.target.size()), m.tgt_vocab.size());
        for (std::size_t t = 0; t < e.target.size(); ++t)
            e.teacher(static_cast<Eigen::Index>(t), e.target[t]) = 1;
    }
    auto hard = m.params.zeros_like();
    auto soft = m.params.zeros_like();
    const double lh = batch_loss_and_gradient(m, pointers(ex), LossKind::Hard, 1.0, hard);
    const double ls = batch_loss_and_gradient(m, pointers(ex), LossKind::Soft, 1.0, soft);
    EXPECT_EQ(lh, ls);
    EXPECT_EQ(hard, soft);
}

TEST(AdamW, ZeroDecayEqualsAdamBitwise) {
    const auto m = probe_model();
    const auto ex = probe_batch(m, false);
    auto a = m.params;
    auto b = m.params;
    auto sa = OptimizerState<double>::for_params(a);
    auto sb = OptimizerState<double>::for_params(b);
    for (int step = 0; step < 5; ++step) {
        auto ga = a.zeros_like();
        StudentModel ma = m;
        ma.params = a;
        batch_loss_and_gradient(ma, pointers(ex), LossKind::Hard, 1.0, ga);
        adamw_step(a, ga, sa, 1e-2, 0.0);
        adam_step(b, ga, sb, 1e-2);
        ASSERT_EQ(a, b) << "step " << step;
    }
}

TEST(AdamW, ZeroGradient) {
    auto p = probe_model().params;
    const auto orig = p;
    auto state = OptimizerState<double>::for_params(p);
    adamw_step(p, p.zeros_like(), state, 0.1, 0.0);
    EXPECT_EQ(p, orig);

    const double lr = 0.05, wd = 0.01;
    auto d = orig;
    auto sd = OptimizerState<double>::for_params(d);
    for (int k = 1; k <= 3; ++k) {
        adamw_step(d, d.zeros_like(), sd, lr, wd);
        const auto got = d.tensors();
        const auto base = orig.tensors();
        for (std::size_t t = 0; t < Parameters::kCount; ++t)
            for (Eigen::Index i = 0; i < got[t]->size(); ++i)
                EXPECT_NEAR(got[t]->data()[i], base[t]->data()[i] * std::pow(1 - lr * wd, k), 1e-12);
    }
}

TEST(AdamW, TwoStepScalarRecursion) {
    const double lr = 0.1, wd = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    auto p = single_scalar(0.5);
    auto state = OptimizerState<double>::for_params(p);
    double theta = 0.5, m = 0, v = 0;
    int step = 0;
    for (double g : {1.0, -1.0}) {
        auto grads = p.zeros_like();
        grads.src_embed(0, 0) = g;
        adamw_step(p, grads, state, lr, wd);
        ++step;
        m = b1 * m + (1 - b1) * g;
        v = b2 * v + (1 - b2) * g * g;
        const double mh = m / (1 - std::pow(b1, step));
        const double vh = v / (1 - std::pow(b2, step));
        theta -= lr * (mh / (std::sqrt(vh) + eps) + wd * theta);
        EXPECT_NEAR(p.src_embed(0, 0), theta, 1e-15);
    }
}

TEST(AdamW, RejectsNonFiniteGradient) {
    auto p = probe_model().params;
    auto state = OptimizerState<double>::for_params(p);
    auto g = p.zeros_like();
    g.attn(0, 0) = std::nan("");
    try {
        adamw_step(p, g, state, 0.1, 0.0);
        FAIL() << "expected an error";
    } catch (const lrmt::Error& e) {
        EXPECT_NE(std::string(e.what()).find("attn"), std::string::npos) << e.what();
    }
}

TEST(Train, ZeroStepsLeavesModelUnchanged) {
    auto m = probe_model();
    const auto orig = m.params;
    TrainConfig cfg;
    cfg.max_steps = 0;
    const auto curve = train(m, probe_batch(m, false), cfg);
    EXPECT_TRUE(curve.empty());
    EXPECT_EQ(m.params, orig);
}

TEST(Train, BitwiseReproducibleForFixedSeed) {
    TrainConfig cfg;
    cfg.lr = 1e-2;
    cfg.batch_size = 2;
    cfg.max_steps = 20;
    auto a = probe_model();
    auto b = probe_model();
    const auto ex = probe_batch(a, false);
    const auto ca = train(a, ex, cfg);
    const auto cb = train(b, ex, cfg);
    ASSERT_EQ(ca.size(), 20u);
    for (std::size_t i = 0; i < ca.size(); ++i)
        EXPECT_EQ(ca[i].loss, cb[i].loss);
    EXPECT_EQ(a.params, b.params);
    EXPECT_LT(ca.back().loss, ca.front().loss);
}

TEST(Train, FinetuneContinuesStepNumbering) {
    TrainConfig cfg;
    cfg.lr = 1e-2;
    cfg.batch_size = 2;
    cfg.max_steps = 10;
    cfg.second_round_steps = 5;
    auto m = probe_model();
    const auto ex = probe_batch(m, false);
    const auto first = train(m, ex, cfg);
    const auto after_first = m.params;
    const auto second = finetune(m, ex, cfg, first);
    ASSERT_EQ(second.size(), 5u);
    EXPECT_EQ(second.front().step, 11);
    EXPECT_NE(m.params, after_first);
}

TEST(Train, CopyTaskReachesHeldOutAccuracy) {
    const auto task = copy_task();
    auto m = copy_model();
    const auto cfg = copy_train_config();
    train(m, task.train, cfg);
    const double acc = token_accuracy(m, task.held_out);
    EXPECT_GE(acc, 0.99);
    const auto& probe = task.held_out.front();
    std::vector<int> decoded = greedy_decode(m, probe.source, 16);
    EXPECT_EQ(decoded, probe.target);
}

TEST(Decode, UntrainedUniformModelEmitsEos) {
    auto m = probe_model();
    m.params.proj_w.setZero();
    m.params.proj_b.setZero();
    EXPECT_EQ(greedy_decode(m, std::vector<int>{4, 2}, 5), std::vector<int>{Vocabulary::kEos});
    m.params.proj_b(7) = 1.0;
    EXPECT_EQ(greedy_decode(m, std::vector<int>{4, 2}, 3), (std::vector<int>{7, 7, 7}));
    EXPECT_EQ(greedy_decode(m, std::vector<int>{4, 2}, 1).size(), 1u);
    EXPECT_THROW(greedy_decode(m, std::vector<int>{4, 2}, 0), lrmt::Error);
}

TEST(Checkpoint, RoundTripIsExact) {
    const auto m = probe_model();
    std::stringstream buf;
    write_checkpoint(buf, m);
    const auto back = read_checkpoint(buf);
    EXPECT_EQ(back.params, m.params);
    EXPECT_EQ(back.src_vocab, m.src_vocab);
    EXPECT_EQ(back.config.hidden_dim, 8);
    std::stringstream again;
    write_checkpoint(again, back);
    std::stringstream first;
    write_checkpoint(first, m);
    EXPECT_EQ(again.str(), first.str());
}
