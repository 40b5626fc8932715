#pragma once

#include <array>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace lrmt::model {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// All trainable tensors of the student. Biases are column matrices so
/// every tensor has one type and sets can be walked in lockstep.
template <typename Scalar>
struct ParameterSet {
    using Matrix = MatrixX<Scalar>;

    Matrix src_embed;  // |Vs| x d
    Matrix tgt_embed;  // |Vt| x d
    Matrix src_pos;    // P x d
    Matrix tgt_pos;    // P x d
    Matrix enc_w;      // h x d
    Matrix enc_b;      // h x 1
    Matrix dec_w;      // h x d
    Matrix dec_b;      // h x 1
    Matrix attn;       // h x h, bilinear attention score q^T A e
    Matrix out_w;      // h x 2h, combines [query; context]
    Matrix out_b;      // h x 1
    Matrix proj_w;     // |Vt| x h
    Matrix proj_b;     // |Vt| x 1

    static constexpr std::size_t kCount = 13;
    static constexpr std::array<std::string_view, kCount> kNames = {
        "src_embed", "tgt_embed", "src_pos", "tgt_pos", "enc_w", "enc_b", "dec_w",
        "dec_b",     "attn",      "out_w",   "out_b",   "proj_w", "proj_b"};

    std::array<Matrix*, kCount> tensors() {
        return {&src_embed, &tgt_embed, &src_pos, &tgt_pos, &enc_w, &enc_b, &dec_w,
                &dec_b,     &attn,      &out_w,   &out_b,   &proj_w, &proj_b};
    }
    std::array<const Matrix*, kCount> tensors() const {
        return {&src_embed, &tgt_embed, &src_pos, &tgt_pos, &enc_w, &enc_b, &dec_w,
                &dec_b,     &attn,      &out_w,   &out_b,   &proj_w, &proj_b};
    }

    ParameterSet zeros_like() const {
        ParameterSet z;
        auto dst = z.tensors();
        auto src = tensors();
        for (std::size_t i = 0; i < kCount; ++i)
            dst[i]->setZero(src[i]->rows(), src[i]->cols());
        return z;
    }

    void set_zero() {
        for (auto* t : tensors())
            t->setZero();
    }

    Eigen::Index size() const {
        Eigen::Index n = 0;
        for (const auto* t : tensors())
            n += t->size();
        return n;
    }

    bool all_finite() const {
        for (const auto* t : tensors())
            if (!t->allFinite())
                return false;
        return true;
    }

    ParameterSet& operator*=(Scalar s) {
        for (auto* t : tensors())
            *t *= s;
        return *this;
    }

    friend bool operator==(const ParameterSet& a, const ParameterSet& b) {
        auto ta = a.tensors();
        auto tb = b.tensors();
        for (std::size_t i = 0; i < kCount; ++i)
            if (ta[i]->rows() != tb[i]->rows() || ta[i]->cols() != tb[i]->cols() || *ta[i] != *tb[i])
                return false;
        return true;
    }
};

} // namespace lrmt::model
