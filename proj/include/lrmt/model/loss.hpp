#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "lrmt/error.hpp"
#include "lrmt/model/parameters.hpp"

namespace lrmt::model {

/// Row-wise softmax of logits / temperature, max-shifted.
template <typename Derived>
MatrixX<typename Derived::Scalar> softmax_rows(const Eigen::MatrixBase<Derived>& logits,
                                               typename Derived::Scalar temperature = 1) {
    using Scalar = typename Derived::Scalar;
    MatrixX<Scalar> out = logits / temperature;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        const Scalar mx = out.row(r).maxCoeff();
        out.row(r) = (out.row(r).array() - mx).exp();
        out.row(r) /= out.row(r).sum();
    }
    return out;
}

/// Re-tempers probability rows: normalize(p^(1/T)). T = 1 returns the input
/// row-normalized, which leaves exactly stochastic rows (e.g. one-hot) as is.
template <typename Derived>
MatrixX<typename Derived::Scalar> temper_rows(const Eigen::MatrixBase<Derived>& probs,
                                              typename Derived::Scalar temperature) {
    using Scalar = typename Derived::Scalar;
    MatrixX<Scalar> out = probs;
    if (temperature != Scalar(1))
        out = probs.array().pow(Scalar(1) / temperature).matrix();
    for (Eigen::Index r = 0; r < out.rows(); ++r)
        out.row(r) /= out.row(r).sum();
    return out;
}

template <typename Derived>
void require_row_stochastic(const Eigen::MatrixBase<Derived>& rows, double tolerance, const char* what) {
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        const double s = static_cast<double>(rows.row(r).sum());
        if (!(std::abs(s - 1.0) <= tolerance) || (rows.row(r).array() < 0).any())
            throw Error(std::string(what) + " row " + std::to_string(r) + " is not a probability distribution");
    }
}

inline std::size_t count_active(std::span<const std::uint8_t> active) {
    std::size_t n = 0;
    for (auto a : active)
        n += a ? 1 : 0;
    return n;
}

/// Mean over active positions of -log p(gold). `active[t] == 0` marks
/// padding; throws if every position is padding.
template <typename Derived>
typename Derived::Scalar cross_entropy_loss(const Eigen::MatrixBase<Derived>& probs, std::span<const int> gold,
                                            std::span<const std::uint8_t> active) {
    using Scalar = typename Derived::Scalar;
    if (static_cast<std::size_t>(probs.rows()) != gold.size() || gold.size() != active.size())
        throw Error("cross_entropy_loss: shape mismatch");
    const auto n = count_active(active);
    if (n == 0)
        throw Error("cross_entropy_loss: all positions are padding");
    Scalar sum = 0;
    for (std::size_t t = 0; t < gold.size(); ++t)
        if (active[t])
            sum -= std::log(probs(static_cast<Eigen::Index>(t), gold[t]));
    return sum / static_cast<Scalar>(n);
}

/// Mean over active positions of the cross-entropy between the tempered
/// teacher rows and the tempered student rows (no T^2 factor). Teacher rows
/// must be stochastic within 1e-4.
template <typename DerivedS, typename DerivedT>
typename DerivedS::Scalar soft_target_loss(const Eigen::MatrixBase<DerivedS>& student_probs,
                                           const Eigen::MatrixBase<DerivedT>& teacher_probs,
                                           typename DerivedS::Scalar temperature,
                                           std::span<const std::uint8_t> active) {
    using Scalar = typename DerivedS::Scalar;
    if (!(temperature > 0))
        throw Error("soft_target_loss: temperature must be positive");
    if (student_probs.rows() != teacher_probs.rows() || student_probs.cols() != teacher_probs.cols() ||
        static_cast<std::size_t>(student_probs.rows()) != active.size())
        throw Error("soft_target_loss: shape mismatch");
    require_row_stochastic(teacher_probs, 1e-4, "teacher distribution");
    const auto n = count_active(active);
    if (n == 0)
        throw Error("soft_target_loss: all positions are padding");
    const auto p = temper_rows(student_probs, temperature);
    const auto q = temper_rows(teacher_probs, temperature);
    Scalar sum = 0;
    for (Eigen::Index t = 0; t < p.rows(); ++t) {
        if (!active[static_cast<std::size_t>(t)])
            continue;
        for (Eigen::Index v = 0; v < p.cols(); ++v)
            if (q(t, v) != 0)
                sum -= q(t, v) * std::log(p(t, v));
    }
    return sum / static_cast<Scalar>(n);
}

} // namespace lrmt::model
