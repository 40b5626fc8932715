#pragma once

#include <cmath>
#include <string>

#include "lrmt/error.hpp"
#include "lrmt/model/parameters.hpp"

namespace lrmt::model {

template <typename Scalar>
struct OptimizerState {
    ParameterSet<Scalar> m;
    ParameterSet<Scalar> v;
    Scalar beta1 = 0.9;
    Scalar beta2 = 0.999;
    Scalar eps = 1e-8;
    long step = 0;

    static OptimizerState for_params(const ParameterSet<Scalar>& params) {
        OptimizerState s;
        s.m = params.zeros_like();
        s.v = params.zeros_like();
        return s;
    }
};

namespace detail {

template <typename Scalar>
void check_grads(const ParameterSet<Scalar>& params, const ParameterSet<Scalar>& grads,
                 const OptimizerState<Scalar>& state) {
    auto p = params.tensors();
    auto g = grads.tensors();
    auto m = state.m.tensors();
    for (std::size_t i = 0; i < ParameterSet<Scalar>::kCount; ++i) {
        if (p[i]->rows() != g[i]->rows() || p[i]->cols() != g[i]->cols() || p[i]->rows() != m[i]->rows() ||
            p[i]->cols() != m[i]->cols())
            throw Error("optimizer: shape mismatch in " + std::string(ParameterSet<Scalar>::kNames[i]));
        if (!g[i]->allFinite())
            throw Error("optimizer: non-finite gradient in " + std::string(ParameterSet<Scalar>::kNames[i]) +
                        " at step " + std::to_string(state.step + 1));
    }
}

// Updates the moments and returns the bias-corrected step direction
// m_hat / (sqrt(v_hat) + eps) for tensor i.
template <typename Scalar>
MatrixX<Scalar> adam_direction(const MatrixX<Scalar>& g, MatrixX<Scalar>& m, MatrixX<Scalar>& v,
                               const OptimizerState<Scalar>& s, Scalar bc1, Scalar bc2) {
    m = s.beta1 * m + (Scalar(1) - s.beta1) * g;
    v = s.beta2 * v + (Scalar(1) - s.beta2) * g.cwiseProduct(g);
    const auto m_hat = (m / bc1).array();
    const auto v_hat = (v / bc2).array();
    return (m_hat / (v_hat.sqrt() + s.eps)).matrix();
}

} // namespace detail

/// One AdamW update with decoupled weight decay:
/// theta <- theta - lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * theta).
template <typename Scalar>
void adamw_step(ParameterSet<Scalar>& params, const ParameterSet<Scalar>& grads, OptimizerState<Scalar>& state,
                Scalar lr, Scalar weight_decay) {
    detail::check_grads(params, grads, state);
    ++state.step;
    const Scalar bc1 = Scalar(1) - std::pow(state.beta1, static_cast<Scalar>(state.step));
    const Scalar bc2 = Scalar(1) - std::pow(state.beta2, static_cast<Scalar>(state.step));
    auto p = params.tensors();
    auto g = grads.tensors();
    auto m = state.m.tensors();
    auto v = state.v.tensors();
    for (std::size_t i = 0; i < ParameterSet<Scalar>::kCount; ++i) {
        const MatrixX<Scalar> dir = detail::adam_direction(*g[i], *m[i], *v[i], state, bc1, bc2);
        *p[i] = *p[i] - lr * (dir + weight_decay * *p[i]);
    }
}

/// Plain Adam (no weight decay term at all).
template <typename Scalar>
void adam_step(ParameterSet<Scalar>& params, const ParameterSet<Scalar>& grads, OptimizerState<Scalar>& state,
               Scalar lr) {
    detail::check_grads(params, grads, state);
    ++state.step;
    const Scalar bc1 = Scalar(1) - std::pow(state.beta1, static_cast<Scalar>(state.step));
    const Scalar bc2 = Scalar(1) - std::pow(state.beta2, static_cast<Scalar>(state.step));
    auto p = params.tensors();
    auto g = grads.tensors();
    auto m = state.m.tensors();
    auto v = state.v.tensors();
    for (std::size_t i = 0; i < ParameterSet<Scalar>::kCount; ++i) {
        const MatrixX<Scalar> dir = detail::adam_direction(*g[i], *m[i], *v[i], state, bc1, bc2);
        *p[i] = *p[i] - lr * dir;
    }
}

} // namespace lrmt::model
