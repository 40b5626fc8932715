#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lrmt/model/parameters.hpp"
#include "lrmt/model/vocabulary.hpp"

namespace lrmt::model {

using Scalar = double;
using Matrix = MatrixX<Scalar>;
using Parameters = ParameterSet<Scalar>;

struct ModelConfig {
    int embed_dim = 16;
    int hidden_dim = 32;
    int max_positions = 32;
    double init_scale = 0.08;  // parameters ~ U[-init_scale, init_scale]
    std::uint64_t seed = 0;

    void validate() const;
};

/// Single-layer attention encoder-decoder over word indices.
///
///   encoder   H = tanh((E_s[x] + P_s) W_e^T + b_e)
///   query     Q = tanh((E_t[y_in] + P_t) W_d^T + b_d)
///   attention alpha = softmax_rows(Q (H A^T)^T),  C = alpha H
///   output    O = tanh([Q C] W_o^T + b_o),  Z = O W_p^T + b_p
///
/// Source sequences end with EOS; the target input starts with BOS.
struct StudentModel {
    ModelConfig config;
    Vocabulary src_vocab;
    Vocabulary tgt_vocab;
    Parameters params;

    /// Allocates parameter tensors for the vocabularies and fills them
    /// deterministically from config.seed.
    static StudentModel create(const ModelConfig& config, Vocabulary src_vocab, Vocabulary tgt_vocab);
};

/// Intermediate activations kept for the backward pass.
struct ForwardCache {
    std::vector<int> src;
    std::vector<int> tgt_in;
    Matrix x, h, y, q, k, alpha, c, qc, o, logits, probs;
};

ForwardCache forward_cached(const StudentModel& model, std::span<const int> src, std::span<const int> tgt_in);

/// One row per target position: the distribution over the target vocabulary
/// of the token following tgt_in[0..t]. Throws lrmt::Error on out-of-range
/// indices or sequences longer than max_positions.
Matrix forward(const StudentModel& model, std::span<const int> src, std::span<const int> tgt_in);

/// Accumulates into `grads` the exact gradient of a loss whose derivative
/// with respect to cache.logits is `dlogits`.
void backward(const StudentModel& model, const ForwardCache& cache, const Matrix& dlogits, Parameters& grads);

/// Emits argmax tokens until EOS or max_len tokens. PAD and BOS are never
/// emitted; ties go to the lowest index. The returned sequence includes the
/// EOS token when one was produced.
std::vector<int> greedy_decode(const StudentModel& model, std::span<const int> src, int max_len);

/// Tokenizes on whitespace, truncates to fit max_positions, decodes greedily
/// and detokenizes with single spaces.
std::string translate(const StudentModel& model, const std::string& sentence);

/// src_vocab.encode(sentence) followed by EOS.
std::vector<int> encode_source(const StudentModel& model, const std::string& sentence);
/// tgt_vocab.encode(sentence) followed by EOS.
std::vector<int> encode_target(const StudentModel& model, const std::string& sentence);

} // namespace lrmt::model
