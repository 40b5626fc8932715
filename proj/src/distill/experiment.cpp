#include "lrmt/distill/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <spdlog/spdlog.h>

#include "lrmt/corpus/corpus.hpp"
#include "lrmt/distill/distill.hpp"
#include "lrmt/distill/toy_teacher.hpp"
#include "lrmt/distill/toy_world.hpp"
#include "lrmt/error.hpp"
#include "lrmt/pseudo/pseudo.hpp"

namespace lrmt::distill {

KdMode parse_kd_mode(const std::string& name) {
    if (name == "sequence")
        return KdMode::Sequence;
    if (name == "token")
        return KdMode::Token;
    throw ConfigError("unknown distillation mode '" + name + "' (expected sequence or token)");
}

const char* kd_mode_name(KdMode mode) { return mode == KdMode::Sequence ? "sequence" : "token"; }

void ExperimentConfig::validate() const {
    model.validate();
    train.validate();
    rule.validate();
    bleu.validate();
    chrf.validate();
    if (!(temperature > 0))
        throw ConfigError("experiment: temperature must be positive");
    if (!(teacher_alpha >= 0 && teacher_alpha < 0.5))
        throw ConfigError("experiment: teacher_alpha must be in [0, 0.5)");
    if (!(max_failure_rate >= 0 && max_failure_rate <= 1))
        throw ConfigError("experiment: max_failure_rate must be in [0, 1]");
}

std::string ExperimentRow::label() const { return finetuned ? data + " + second-round FT" : data; }

const ExperimentRow& ExperimentReport::row(const std::string& data, bool finetuned) const {
    for (const auto& r : rows)
        if (r.data == data && r.finetuned == finetuned)
            return r;
    throw Error("experiment report has no row '" + data + "'");
}

namespace {

std::filesystem::path require_file(const std::filesystem::path& dir, const char* name) {
    auto p = dir / name;
    if (!std::filesystem::is_regular_file(p))
        throw Error("experiment: missing input file " + p.string());
    return p;
}

std::vector<std::string> side_of(const corpus::Corpus& c, corpus::Side side, const char* file) {
    std::vector<std::string> out;
    out.reserve(c.size());
    for (const auto& r : c) {
        const auto& s = r.side(side);
        if (!s)
            throw Error(std::string("experiment: record '") + r.id + "' in " + file + " lacks the " +
                        corpus::side_key(side) + " side");
        out.push_back(*s);
    }
    return out;
}

std::vector<model::TrainingExample> pairs(const model::StudentModel& m, const std::vector<std::string>& src,
                                          const std::vector<std::string>& tgt) {
    std::vector<model::TrainingExample> out;
    out.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
        out.push_back({model::encode_source(m, src[i]), model::encode_target(m, tgt[i]), {}});
    return out;
}

std::vector<std::string> translate_all(const model::StudentModel& m, const std::vector<std::string>& src) {
    std::vector<std::string> out;
    out.reserve(src.size());
    for (const auto& s : src)
        out.push_back(model::translate(m, s));
    return out;
}

struct TestSet {
    std::vector<std::string> src;
    std::vector<std::string> ref;
};

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    for (const auto& l : lines)
        out << l << '\n';
}

std::string slug(const ExperimentRow& row) {
    std::string s = row.data + (row.finetuned ? "_ft" : "");
    for (auto& ch : s)
        if (ch == '-')
            ch = '_';
    return s;
}

} // namespace

ExperimentReport kd_experiment(const std::filesystem::path& data_dir, const ExperimentConfig& config,
                               const std::optional<std::filesystem::path>& artifact_dir) {
    config.validate();
    using corpus::Side;
    const auto train_path = require_file(data_dir, kToyTrainFile);
    const auto ft_path = require_file(data_dir, kToyFinetuneFile);
    const auto test_a_path = require_file(data_dir, kToyTestAFile);
    const auto test_b_path = require_file(data_dir, kToyTestBFile);
    const auto dict_path = require_file(data_dir, kToyDictionaryFile);
    const auto lexicon_path = require_file(data_dir, kToyLexiconFile);

    const auto train = corpus::load_corpus(train_path, corpus::Format::Jsonl);
    const auto ft = corpus::load_corpus(ft_path, corpus::Format::Jsonl);
    const auto test_a = corpus::load_corpus(test_a_path, corpus::Format::Jsonl);
    const auto test_b = corpus::load_corpus(test_b_path, corpus::Format::Jsonl);
    const auto dict = pseudo::build_dictionary(dict_path);
    const ToyTeacher teacher(load_toy_lexicon(lexicon_path), config.teacher_alpha);

    if (train.empty() || ft.empty() || test_a.empty() || test_b.empty())
        throw Error("experiment: every toy corpus must be non-empty");

    // Training data for the three students.
    const auto train_lrl = side_of(train, Side::Lrl, kToyTrainFile);
    const auto train_en = side_of(train, Side::En, kToyTrainFile);
    const auto pseudo_res = pseudo::pseudo_translate(train, dict, config.rule);
    if (pseudo_res.dropped_missing_hrl != 0)
        throw Error("experiment: " + std::string(kToyTrainFile) + " has records without the de side");
    const auto pseudo_lrl = side_of(pseudo_res.records, Side::Lrl, kToyTrainFile);

    std::vector<SourceSentence> sources;
    for (std::size_t i = 0; i < train.size(); ++i)
        sources.push_back({train[i].id, train_lrl[i]});
    const auto generated = generate_soft_targets(teacher, sources, config.max_failure_rate);
    const auto& soft = generated.records;

    const auto ft_lrl = side_of(ft, Side::Lrl, kToyFinetuneFile);
    const auto ft_en = side_of(ft, Side::En, kToyFinetuneFile);
    const TestSet set_a{side_of(test_a, Side::Lrl, kToyTestAFile), side_of(test_a, Side::En, kToyTestAFile)};
    const TestSet set_b{side_of(test_b, Side::Lrl, kToyTestBFile), side_of(test_b, Side::En, kToyTestBFile)};

    std::vector<std::string> teacher_a;
    for (const auto& s : set_a.src) {
        const auto out = teacher.translate(s);
        std::string line;
        if (out)
            for (const auto& t : out->tokens)
                line += (line.empty() ? "" : " ") + t;
        teacher_a.push_back(line);
    }

    // One vocabulary pair shared by every student, built from training-side text only.
    std::vector<std::string> src_text = train_lrl;
    src_text.insert(src_text.end(), pseudo_lrl.begin(), pseudo_lrl.end());
    src_text.insert(src_text.end(), ft_lrl.begin(), ft_lrl.end());
    std::vector<std::string> tgt_text = train_en;
    tgt_text.insert(tgt_text.end(), ft_en.begin(), ft_en.end());
    for (const auto& r : soft) {
        std::string line;
        for (const auto& t : r.hypothesis)
            line += (line.empty() ? "" : " ") + t;
        tgt_text.push_back(line);
    }
    const auto src_vocab = model::Vocabulary::from_sentences(src_text);
    const auto tgt_vocab = model::Vocabulary::from_sentences(tgt_text);

    ExperimentReport report;
    report.train_pairs = train.size();
    report.finetune_pairs = ft.size();
    report.test_a_pairs = test_a.size();
    report.test_b_pairs = test_b.size();
    report.teacher_failures = generated.failed_ids.size();
    report.teacher = teacher.id();
    report.config = config;

    auto score = [&](const model::StudentModel& m, ExperimentRow& row, const model::LossCurve& curve) {
        const auto hyp_a = translate_all(m, set_a.src);
        const auto hyp_b = translate_all(m, set_b.src);
        row.scores[0] = metrics::bleu(hyp_a, set_a.ref, config.bleu).score;
        row.scores[1] = metrics::chrf_pp(hyp_a, set_a.ref, config.chrf).score;
        row.scores[2] = metrics::bleu(hyp_b, set_b.ref, config.bleu).score;
        row.scores[3] = metrics::chrf_pp(hyp_b, set_b.ref, config.chrf).score;
        row.teacher_agreement_bleu = metrics::bleu(hyp_a, teacher_a, config.bleu).score;
        row.final_loss = curve.empty() ? 0.0 : curve.back().loss;
        if (artifact_dir) {
            write_lines(*artifact_dir / ("hyp_" + slug(row) + "_test_a.txt"), hyp_a);
            write_lines(*artifact_dir / ("hyp_" + slug(row) + "_test_b.txt"), hyp_b);
            model::save_loss_curve(*artifact_dir / ("loss_" + slug(row) + ".csv"), curve);
        }
        spdlog::info("experiment: {:<32} BLEU A {:6.2f}  chrF++ A {:6.2f}  BLEU B {:6.2f}  chrF++ B {:6.2f}",
                     row.label(), row.scores[0], row.scores[1], row.scores[2], row.scores[3]);
    };

    if (artifact_dir)
        std::filesystem::create_directories(*artifact_dir);

    for (const std::string data : {"pseudo", "distilled", "ground-truth"}) {
        auto student = model::StudentModel::create(config.model, src_vocab, tgt_vocab);
        model::LossCurve curve;
        if (data == "pseudo") {
            curve = model::train(student, pairs(student, pseudo_lrl, train_en), config.train);
        } else if (data == "ground-truth") {
            curve = model::train(student, pairs(student, train_lrl, train_en), config.train);
        } else if (config.kd_mode == KdMode::Sequence) {
            curve = distill_sequence_level(student, soft, config.train);
        } else {
            curve = distill_token_level(student, soft, config.temperature, config.train);
        }
        ExperimentRow first{data, false};
        score(student, first, curve);
        report.rows.push_back(first);

        const auto ft_curve = model::finetune(student, pairs(student, ft_lrl, ft_en), config.train, curve);
        ExperimentRow second{data, true};
        score(student, second, ft_curve);
        report.rows.push_back(second);
    }
    return report;
}

nlohmann::ordered_json to_json(const ExperimentReport& report) {
    nlohmann::ordered_json j;
    j["columns"] = kReportColumns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        row["data"] = r.data;
        row["second_round_finetune"] = r.finetuned;
        row["test_a_bleu"] = r.scores[0];
        row["test_a_chrfpp"] = r.scores[1];
        row["test_b_bleu"] = r.scores[2];
        row["test_b_chrfpp"] = r.scores[3];
        row["test_a_teacher_agreement_bleu"] = r.teacher_agreement_bleu;
        row["final_loss"] = r.final_loss;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["train_pairs"] = report.train_pairs;
    j["finetune_pairs"] = report.finetune_pairs;
    j["test_a_pairs"] = report.test_a_pairs;
    j["test_b_pairs"] = report.test_b_pairs;
    j["teacher"] = report.teacher;
    j["teacher_failures"] = report.teacher_failures;
    const auto& c = report.config;
    j["seed"] = c.seed;
    j["model_seed"] = c.model.seed;
    j["train_seed"] = c.train.seed;
    j["kd_mode"] = kd_mode_name(c.kd_mode);
    j["temperature"] = c.temperature;
    j["first_round_steps"] = c.train.max_steps;
    j["second_round_steps"] = c.train.second_round_steps;
    j["lr"] = c.train.lr;
    j["bleu_signature"] = c.bleu.signature();
    j["chrf_signature"] = c.chrf.signature();
    return j;
}

void write_report_markdown(std::ostream& out, const ExperimentReport& report) {
    out << "| data | " << kReportColumns[0] << " | " << kReportColumns[1] << " | " << kReportColumns[2] << " | "
        << kReportColumns[3] << " |\n";
    out << "|---|---:|---:|---:|---:|\n";
    char cell[32];
    for (const auto& r : report.rows) {
        out << "| " << r.label();
        for (double s : r.scores) {
            std::snprintf(cell, sizeof cell, "%.2f", s);
            out << " | " << cell;
        }
        out << " |\n";
    }
    out << "\nTrain pairs: " << report.train_pairs << ", fine-tune pairs: " << report.finetune_pairs
        << ", test A: " << report.test_a_pairs << ", test B: " << report.test_b_pairs << ".\n";
    out << "Teacher: " << report.teacher << " (" << report.teacher_failures << " failures), KD mode "
        << kd_mode_name(report.config.kd_mode) << ", seed " << report.config.seed << ".\n";
}

void save_report(const std::filesystem::path& dir, const ExperimentReport& report) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream md(dir / "report.md");
        write_report_markdown(md, report);
    }
    std::ofstream js(dir / "report.json");
    js << to_json(report).dump(2) << '\n';
}

} // namespace lrmt::distill
