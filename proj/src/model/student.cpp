#include "lrmt/model/student.hpp"

#include <algorithm>

#include "lrmt/error.hpp"
#include "lrmt/model/loss.hpp"
#include "lrmt/random.hpp"

namespace lrmt::model {

void ModelConfig::validate() const {
    if (embed_dim < 1 || hidden_dim < 1 || max_positions < 2)
        throw ConfigError("model requires embed_dim >= 1, hidden_dim >= 1, max_positions >= 2");
    if (!(init_scale >= 0))
        throw ConfigError("model init_scale must be non-negative");
}

StudentModel StudentModel::create(const ModelConfig& config, Vocabulary src_vocab, Vocabulary tgt_vocab) {
    config.validate();
    StudentModel m{config, std::move(src_vocab), std::move(tgt_vocab), {}};
    const int d = config.embed_dim;
    const int h = config.hidden_dim;
    const int npos = config.max_positions;
    auto& p = m.params;
    p.src_embed.resize(m.src_vocab.size(), d);
    p.tgt_embed.resize(m.tgt_vocab.size(), d);
    p.src_pos.resize(npos, d);
    p.tgt_pos.resize(npos, d);
    p.enc_w.resize(h, d);
    p.enc_b.resize(h, 1);
    p.dec_w.resize(h, d);
    p.dec_b.resize(h, 1);
    p.attn.resize(h, h);
    p.out_w.resize(h, 2 * h);
    p.out_b.resize(h, 1);
    p.proj_w.resize(m.tgt_vocab.size(), h);
    p.proj_b.resize(m.tgt_vocab.size(), 1);
    Rng rng(config.seed);
    for (auto* t : p.tensors())
        for (Eigen::Index i = 0; i < t->size(); ++i)
            t->data()[i] = rng.uniform(-config.init_scale, config.init_scale);
    return m;
}

namespace {

void check_sequence(std::span<const int> seq, int vocab_size, int max_positions, const char* what) {
    if (seq.empty())
        throw Error(std::string(what) + " sequence is empty");
    if (static_cast<int>(seq.size()) > max_positions)
        throw Error(std::string(what) + " sequence of length " + std::to_string(seq.size()) +
                    " exceeds max_positions " + std::to_string(max_positions));
    for (int i : seq)
        if (i < 0 || i >= vocab_size)
            throw Error(std::string(what) + " index " + std::to_string(i) + " outside vocabulary of size " +
                        std::to_string(vocab_size));
}

Matrix embed(const Matrix& table, const Matrix& pos, std::span<const int> seq) {
    Matrix out(static_cast<Eigen::Index>(seq.size()), table.cols());
    for (std::size_t i = 0; i < seq.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = table.row(seq[i]) + pos.row(static_cast<Eigen::Index>(i));
    return out;
}

Matrix affine_tanh(const Matrix& in, const Matrix& w, const Matrix& b) {
    Matrix pre = in * w.transpose();
    pre.rowwise() += b.col(0).transpose();
    return pre.array().tanh().matrix();
}

void scatter_rows(Matrix& table, Matrix& pos, std::span<const int> seq, const Matrix& d) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        table.row(seq[i]) += d.row(r);
        pos.row(r) += d.row(r);
    }
}

} // namespace

ForwardCache forward_cached(const StudentModel& model, std::span<const int> src, std::span<const int> tgt_in) {
    const auto& p = model.params;
    check_sequence(src, model.src_vocab.size(), model.config.max_positions, "source");
    check_sequence(tgt_in, model.tgt_vocab.size(), model.config.max_positions, "target");

    ForwardCache c;
    c.src.assign(src.begin(), src.end());
    c.tgt_in.assign(tgt_in.begin(), tgt_in.end());
    c.x = embed(p.src_embed, p.src_pos, src);
    c.h = affine_tanh(c.x, p.enc_w, p.enc_b);
    c.y = embed(p.tgt_embed, p.tgt_pos, tgt_in);
    c.q = affine_tanh(c.y, p.dec_w, p.dec_b);
    c.k = c.h * p.attn.transpose();
    c.alpha = softmax_rows(c.q * c.k.transpose());
    c.c = c.alpha * c.h;
    c.qc.resize(c.q.rows(), 2 * c.q.cols());
    c.qc << c.q, c.c;
    c.o = affine_tanh(c.qc, p.out_w, p.out_b);
    c.logits = c.o * p.proj_w.transpose();
    c.logits.rowwise() += p.proj_b.col(0).transpose();
    c.probs = softmax_rows(c.logits);
    return c;
}

Matrix forward(const StudentModel& model, std::span<const int> src, std::span<const int> tgt_in) {
    return forward_cached(model, src, tgt_in).probs;
}

void backward(const StudentModel& model, const ForwardCache& c, const Matrix& dz, Parameters& g) {
    const auto& p = model.params;
    const auto hd = p.enc_w.rows();

    g.proj_w.noalias() += dz.transpose() * c.o;
    g.proj_b += dz.colwise().sum().transpose();
    const Matrix d_o = dz * p.proj_w;

    const Matrix d_u = d_o.cwiseProduct((1.0 - c.o.array().square()).matrix());
    g.out_w.noalias() += d_u.transpose() * c.qc;
    g.out_b += d_u.colwise().sum().transpose();
    const Matrix d_qc = d_u * p.out_w;

    Matrix d_q = d_qc.leftCols(hd);
    const Matrix d_ctx = d_qc.rightCols(hd);

    const Matrix d_alpha = d_ctx * c.h.transpose();
    Matrix d_h = c.alpha.transpose() * d_ctx;

    // softmax backward: dS = alpha .* (dalpha - rowsum(dalpha .* alpha))
    const Eigen::VectorXd inner = d_alpha.cwiseProduct(c.alpha).rowwise().sum();
    const Matrix d_s = c.alpha.cwiseProduct((d_alpha.colwise() - inner));

    d_q.noalias() += d_s * c.k;
    const Matrix d_k = d_s.transpose() * c.q;
    g.attn.noalias() += d_k.transpose() * c.h;
    d_h.noalias() += d_k * p.attn;

    const Matrix d_ypre = d_q.cwiseProduct((1.0 - c.q.array().square()).matrix());
    g.dec_w.noalias() += d_ypre.transpose() * c.y;
    g.dec_b += d_ypre.colwise().sum().transpose();
    scatter_rows(g.tgt_embed, g.tgt_pos, c.tgt_in, d_ypre * p.dec_w);

    const Matrix d_hpre = d_h.cwiseProduct((1.0 - c.h.array().square()).matrix());
    g.enc_w.noalias() += d_hpre.transpose() * c.x;
    g.enc_b += d_hpre.colwise().sum().transpose();
    scatter_rows(g.src_embed, g.src_pos, c.src, d_hpre * p.enc_w);
}

std::vector<int> greedy_decode(const StudentModel& model, std::span<const int> src, int max_len) {
    if (max_len < 1)
        throw Error("greedy_decode: max_len must be >= 1");
    const auto& p = model.params;
    check_sequence(src, model.src_vocab.size(), model.config.max_positions, "source");
    max_len = std::min(max_len, model.config.max_positions);

    const Matrix h = affine_tanh(embed(p.src_embed, p.src_pos, src), p.enc_w, p.enc_b);
    const Matrix k = h * p.attn.transpose();

    std::vector<int> out;
    int prev = Vocabulary::kBos;
    for (int t = 0; t < max_len; ++t) {
        const Matrix y = p.tgt_embed.row(prev) + p.tgt_pos.row(t);
        const Matrix q = affine_tanh(y, p.dec_w, p.dec_b);
        const Matrix alpha = softmax_rows(q * k.transpose());
        Matrix qc(1, 2 * q.cols());
        qc << q, alpha * h;
        const Matrix o = affine_tanh(qc, p.out_w, p.out_b);
        Matrix logits = o * p.proj_w.transpose();
        logits += p.proj_b.transpose();

        int best = Vocabulary::kEos;
        for (Eigen::Index v = Vocabulary::kEos + 1; v < logits.cols(); ++v)
            if (logits(0, v) > logits(0, best))
                best = static_cast<int>(v);
        out.push_back(best);
        if (best == Vocabulary::kEos)
            break;
        prev = best;
    }
    return out;
}

std::vector<int> encode_source(const StudentModel& model, const std::string& sentence) {
    auto ids = model.src_vocab.encode(sentence);
    ids.push_back(Vocabulary::kEos);
    return ids;
}

std::vector<int> encode_target(const StudentModel& model, const std::string& sentence) {
    auto ids = model.tgt_vocab.encode(sentence);
    ids.push_back(Vocabulary::kEos);
    return ids;
}

std::string translate(const StudentModel& model, const std::string& sentence) {
    auto ids = model.src_vocab.encode(sentence);
    const auto limit = static_cast<std::size_t>(model.config.max_positions - 1);
    if (ids.size() > limit)
        ids.resize(limit);
    ids.push_back(Vocabulary::kEos);
    const int max_len = std::min(model.config.max_positions, 2 * static_cast<int>(ids.size()) + 4);
    return model.tgt_vocab.decode(greedy_decode(model, ids, max_len));
}

} // namespace lrmt::model
