#include "lrmt/cli/commands.hpp"

#include <fstream>
#include <list>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "lrmt/bench/bench.hpp"
#include "lrmt/cli/config.hpp"
#include "lrmt/corpus/corpus.hpp"
#include "lrmt/distill/distill.hpp"
#include "lrmt/distill/experiment.hpp"
#include "lrmt/distill/soft_targets.hpp"
#include "lrmt/distill/toy_teacher.hpp"
#include "lrmt/distill/toy_world.hpp"
#include "lrmt/error.hpp"
#include "lrmt/metrics/bleu.hpp"
#include "lrmt/metrics/chrf.hpp"
#include "lrmt/model/checkpoint.hpp"
#include "lrmt/pseudo/dictionary.hpp"
#include "lrmt/pseudo/pseudo.hpp"

namespace lrmt::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void setup_logging(const std::string& level) {
    auto logger = spdlog::get("lrmt");
    if (!logger)
        logger = spdlog::stderr_logger_mt("lrmt");
    spdlog::set_default_logger(logger);
    const auto lvl = spdlog::level::from_str(level);
    if (lvl == spdlog::level::off && level != "off")
        throw ConfigError("unknown log level '" + level + "'");
    spdlog::set_level(lvl);
}

/// Options every subcommand shares, plus the flag-to-key assignments a
/// subcommand registers. Flags are applied after --set, so they win.
struct Common {
    std::optional<std::string> config;
    std::vector<std::string> sets;
    std::optional<std::string> seed;
    std::optional<std::string> output_dir;
    std::string log_level = "info";
    std::list<std::pair<std::string, std::optional<std::string>>> flag_keys;

    std::vector<std::string> overrides() const {
        std::vector<std::string> out = sets;
        if (seed)
            out.push_back("run.seed=" + *seed);
        if (output_dir)
            out.push_back("run.output_dir=" + *output_dir);
        for (const auto& [key, value] : flag_keys)
            if (value)
                out.push_back(key + "=" + *value);
        return out;
    }
};

/// Registers a flag that overrides `key` in the resolved config.
void config_flag(CLI::App& cmd, Common& common, const std::string& flag, const std::string& key,
                 const std::string& help) {
    common.flag_keys.emplace_back(key, std::nullopt);
    auto& slot = common.flag_keys.back().second;
    cmd.add_option_function<std::string>(flag, [&slot](const std::string& v) { slot = v; },
                                         help + " (config " + key + ")");
}

void add_common(CLI::App& cmd, Common& common) {
    cmd.add_option("-c,--config", common.config, "INI config file (default: $" + std::string(kConfigEnvVar) + ")");
    cmd.add_option("--set", common.sets, "Override a config value, as section.key=value (repeatable)");
    cmd.add_option("--seed", common.seed, "Top-level seed (config run.seed)");
    cmd.add_option("-o,--output-dir", common.output_dir, "Directory for all artifacts (config run.output_dir)");
    cmd.add_option("--log-level", common.log_level, "trace, debug, info, warn, err or off")->capture_default_str();
}

PipelineConfig prepare(const Common& common, const std::string& command) {
    setup_logging(common.log_level);
    auto cfg = resolve_config(common.config ? std::optional<fs::path>(*common.config) : std::nullopt,
                              common.overrides());
    fs::create_directories(cfg.output_dir);
    save_config(cfg.output_dir / kEffectiveConfigFile, cfg);
    std::ostringstream text;
    write_config(text, cfg);
    spdlog::info("{}: seed {} output {}", command, cfg.seed, cfg.output_dir.string());
    spdlog::debug("{}: resolved config\n{}", command, text.str());
    return cfg;
}

fs::path require_input(const fs::path& path, const std::string& what) {
    if (path.empty())
        throw ConfigError(what + " is required");
    if (!fs::exists(path))
        throw ConfigError(what + " does not exist: " + path.string());
    return path;
}

corpus::Format input_format(const PipelineConfig& cfg, const fs::path& path) {
    return cfg.corpus_format == "auto" ? corpus::format_from_path(path) : corpus::parse_format(cfg.corpus_format);
}

const char* extension(corpus::Format f) { return f == corpus::Format::Tsv ? ".tsv" : ".jsonl"; }

void write_json(const fs::path& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    for (const auto& l : lines)
        out << l << '\n';
}

std::vector<std::string> side_or_throw(const corpus::Corpus& c, corpus::Side side, const fs::path& file) {
    std::vector<std::string> out;
    for (const auto& r : c) {
        if (!r.side(side))
            throw Error("record '" + r.id + "' in " + file.string() + " lacks the " + corpus::side_key(side) +
                        " side");
        out.push_back(*r.side(side));
    }
    return out;
}

ordered_json scores_json(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                         const PipelineConfig& cfg) {
    const auto b = metrics::bleu(hyps, refs, cfg.bleu);
    const auto c = metrics::chrf_pp(hyps, refs, cfg.chrf);
    ordered_json j;
    j["bleu"] = b.score;
    j["chrfpp"] = c.score;
    j["sentences"] = hyps.size();
    j["bleu_report"] = metrics::to_json(b);
    j["chrfpp_report"] = metrics::to_json(c);
    return j;
}

std::vector<model::TrainingExample> corpus_examples(const model::StudentModel& m, const corpus::Corpus& c,
                                                    const PipelineConfig& cfg, const fs::path& file) {
    const auto src = side_or_throw(c, cfg.src_side, file);
    const auto tgt = side_or_throw(c, cfg.tgt_side, file);
    std::vector<model::TrainingExample> out;
    for (std::size_t i = 0; i < src.size(); ++i)
        out.push_back({model::encode_source(m, src[i]), model::encode_target(m, tgt[i]), {}});
    return out;
}

struct Subcommand {
    CLI::App* app;
    Common common;
    std::function<void(const PipelineConfig&)> body;
};

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Low-resource translation toolkit: corpus filtering, pseudo-translation, distillation, "
                 "training, evaluation and latency benchmarking.",
                 "lrmt"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::list<Subcommand> subs;
    auto add = [&](const std::string& name, const std::string& description) -> Subcommand& {
        auto& s = subs.emplace_back();
        s.app = app.add_subcommand(name, description);
        add_common(*s.app, s.common);
        return s;
    };

    // corpus-filter
    std::string filter_input;
    {
        auto& s = add("corpus-filter", "Keep records whose sides have between min and max characters");
        s.app->add_option("-i,--input", filter_input, "Corpus file (.jsonl or .tsv)")->required();
        config_flag(*s.app, s.common, "--min", "corpus.min_chars", "Minimum characters, inclusive");
        config_flag(*s.app, s.common, "--max", "corpus.max_chars", "Maximum characters, inclusive");
        config_flag(*s.app, s.common, "--sides", "corpus.sides", "Comma-separated sides to check (lb,de,en)");
        config_flag(*s.app, s.common, "--format", "corpus.format", "auto, jsonl or tsv");
        s.body = [&](const PipelineConfig& cfg) {
            const auto in = require_input(filter_input, "--input");
            const auto fmt = input_format(cfg, in);
            const auto res = corpus::filter_by_length(corpus::load_corpus(in, fmt), cfg.filter);
            corpus::save_corpus(cfg.output_dir / (std::string("filtered") + extension(fmt)), res.kept, fmt);
            ordered_json j;
            j["input"] = in.string();
            j["kept"] = res.kept.size();
            j["dropped_length"] = res.dropped_length;
            j["dropped_missing_side"] = res.dropped_missing_side;
            j["min_chars"] = cfg.filter.min_chars;
            j["max_chars"] = cfg.filter.max_chars;
            write_json(cfg.output_dir / "filter_report.json", j);
            spdlog::info("corpus-filter: kept {}, dropped {} by length, {} missing a side", res.kept.size(),
                         res.dropped_length, res.dropped_missing_side);
        };
    }

    // corpus-stats
    std::string stats_input;
    {
        auto& s = add("corpus-stats", "Record counts, length histograms and vocabulary sizes per side");
        s.app->add_option("-i,--input", stats_input, "Corpus file (.jsonl or .tsv)")->required();
        config_flag(*s.app, s.common, "--format", "corpus.format", "auto, jsonl or tsv");
        s.body = [&](const PipelineConfig& cfg) {
            const auto in = require_input(stats_input, "--input");
            const auto stats = corpus::corpus_stats(corpus::load_corpus(in, input_format(cfg, in)));
            ordered_json j;
            j["records"] = stats.record_count;
            ordered_json sides;
            for (const auto& [side, st] : stats.sides) {
                ordered_json hist = ordered_json::object();
                for (const auto& [len, n] : st.length_histogram)
                    hist[std::to_string(len)] = n;
                sides[corpus::side_key(side)] = {
                    {"present", st.present}, {"vocabulary_size", st.vocabulary_size}, {"length_histogram", hist}};
            }
            j["sides"] = sides;
            write_json(cfg.output_dir / "stats.json", j);
        };
    }

    // pseudo-build-dict
    std::string dict_input;
    {
        auto& s = add("pseudo-build-dict", "Validate an hrl<TAB>lrl dictionary and write it in canonical order");
        s.app->add_option("-i,--input", dict_input, "Dictionary TSV (config paths.dictionary)");
        s.body = [&](const PipelineConfig& cfg) {
            const auto in = require_input(dict_input.empty() ? cfg.dictionary : fs::path(dict_input), "dictionary");
            const auto dict = pseudo::build_dictionary(in);
            std::ofstream out(cfg.output_dir / "dictionary.tsv", std::ios::binary);
            pseudo::write_dictionary(out, dict);
            write_json(cfg.output_dir / "dictionary_report.json", {{"input", in.string()}, {"entries", dict.size()}});
            spdlog::info("pseudo-build-dict: {} entries", dict.size());
        };
    }

    // pseudo-translate
    std::string pt_input, pt_dict;
    {
        auto& s = add("pseudo-translate", "Dictionary substitution then the n-deletion rule, hrl side -> lrl side");
        s.app->add_option("-i,--input", pt_input, "Corpus with an hrl (de) side")->required();
        s.app->add_option("-d,--dictionary", pt_dict, "Dictionary TSV (config paths.dictionary)");
        config_flag(*s.app, s.common, "--format", "corpus.format", "auto, jsonl or tsv");
        config_flag(*s.app, s.common, "--exceptions", "eifeler.exceptions", "Words never modified, space-separated");
        config_flag(*s.app, s.common, "--retain-at-pause", "eifeler.retain_at_pause", "true or false");
        s.body = [&](const PipelineConfig& cfg) {
            const auto in = require_input(pt_input, "--input");
            const auto dpath = require_input(pt_dict.empty() ? cfg.dictionary : fs::path(pt_dict), "dictionary");
            const auto fmt = input_format(cfg, in);
            const auto res =
                pseudo::pseudo_translate(corpus::load_corpus(in, fmt), pseudo::build_dictionary(dpath), cfg.eifeler);
            corpus::save_corpus(cfg.output_dir / (std::string("pseudo") + extension(fmt)), res.records, fmt);
            write_json(cfg.output_dir / "pseudo_report.json",
                       {{"input", in.string()},
                        {"records", res.records.size()},
                        {"dropped_missing_hrl", res.dropped_missing_hrl}});
        };
    }

    // distill-generate
    std::string dg_input, dg_lexicon;
    {
        auto& s = add("distill-generate", "Run the toy teacher over the lrl side and write soft targets");
        s.app->add_option("-i,--input", dg_input, "Corpus whose source side is translated")->required();
        s.app->add_option("--lexicon", dg_lexicon, "Teacher lexicon TSV (config paths.lexicon)");
        config_flag(*s.app, s.common, "--alpha", "distill.teacher_alpha", "Teacher smoothing mass in [0, 0.5)");
        config_flag(*s.app, s.common, "--max-failure-rate", "distill.max_failure_rate",
                    "Largest tolerated share of teacher failures");
        config_flag(*s.app, s.common, "--src-side", "corpus.src_side", "Side to translate");
        s.body = [&](const PipelineConfig& cfg) {
            const auto in = require_input(dg_input, "--input");
            const auto lex = require_input(dg_lexicon.empty() ? cfg.lexicon : fs::path(dg_lexicon), "lexicon");
            const auto records = corpus::load_corpus(in, input_format(cfg, in));
            std::vector<distill::SourceSentence> sources;
            for (const auto& r : records) {
                if (!r.side(cfg.src_side))
                    throw Error("record '" + r.id + "' lacks the " + corpus::side_key(cfg.src_side) + " side");
                sources.push_back({r.id, *r.side(cfg.src_side)});
            }
            const distill::ToyTeacher teacher(distill::load_toy_lexicon(lex), cfg.teacher_alpha);
            const auto res = distill::generate_soft_targets(teacher, sources, cfg.max_failure_rate);
            distill::save_soft_targets(cfg.output_dir / "soft_targets.jsonl", res.records);
            write_json(cfg.output_dir / "generation_report.json", {{"teacher", teacher.id()},
                                                                  {"sources", sources.size()},
                                                                  {"records", res.records.size()},
                                                                  {"failed_ids", res.failed_ids},
                                                                  {"seed", cfg.seed}});
        };
    }

    // train
    std::string train_corpus, train_soft;
    std::vector<std::string> vocab_extra;
    {
        auto& s = add("train", "First-round student training on a parallel corpus or on soft targets");
        s.app->add_option("--corpus", train_corpus, "Parallel corpus (hard cross-entropy on src/tgt sides)");
        s.app->add_option("--soft-targets", train_soft, "Soft-target file from distill-generate");
        s.app->add_option("--vocab-corpus", vocab_extra,
                          "Extra corpora whose src/tgt words join the vocabularies (repeatable)");
        config_flag(*s.app, s.common, "--mode", "distill.mode", "sequence or token (soft targets only)");
        config_flag(*s.app, s.common, "--temperature", "distill.temperature", "Soft-target temperature");
        config_flag(*s.app, s.common, "--steps", "train.max_steps", "Training steps");
        config_flag(*s.app, s.common, "--lr", "train.lr", "Learning rate");
        config_flag(*s.app, s.common, "--batch-size", "train.batch_size", "Batch size");
        config_flag(*s.app, s.common, "--src-side", "corpus.src_side", "Source side");
        config_flag(*s.app, s.common, "--tgt-side", "corpus.tgt_side", "Target side");
        s.body = [&](const PipelineConfig& cfg) {
            if (train_corpus.empty() == train_soft.empty())
                throw ConfigError("train needs exactly one of --corpus or --soft-targets");
            std::vector<std::string> src_text, tgt_text;
            corpus::Corpus parallel;
            std::vector<distill::SoftTargetRecord> soft;
            if (!train_corpus.empty()) {
                const auto in = require_input(train_corpus, "--corpus");
                parallel = corpus::load_corpus(in, input_format(cfg, in));
                src_text = side_or_throw(parallel, cfg.src_side, in);
                tgt_text = side_or_throw(parallel, cfg.tgt_side, in);
            } else {
                soft = distill::load_soft_targets(require_input(train_soft, "--soft-targets"));
                for (const auto& r : soft) {
                    src_text.push_back(r.source);
                    std::string line;
                    for (const auto& t : r.hypothesis)
                        line += (line.empty() ? "" : " ") + t;
                    tgt_text.push_back(line);
                }
            }
            for (const auto& extra : vocab_extra) {
                const auto in = require_input(extra, "--vocab-corpus");
                const auto c = corpus::load_corpus(in, input_format(cfg, in));
                for (const auto& r : c) {
                    if (r.side(cfg.src_side))
                        src_text.push_back(*r.side(cfg.src_side));
                    if (r.side(cfg.tgt_side))
                        tgt_text.push_back(*r.side(cfg.tgt_side));
                }
            }
            auto student = model::StudentModel::create(cfg.model, model::Vocabulary::from_sentences(src_text),
                                                       model::Vocabulary::from_sentences(tgt_text));
            model::LossCurve curve;
            if (!parallel.empty())
                curve = model::train(student, corpus_examples(student, parallel, cfg, train_corpus), cfg.train);
            else if (cfg.kd_mode == distill::KdMode::Sequence)
                curve = distill::distill_sequence_level(student, soft, cfg.train);
            else
                curve = distill::distill_token_level(student, soft, cfg.temperature, cfg.train);
            model::save_checkpoint(cfg.output_dir / "model.json", student);
            model::save_loss_curve(cfg.output_dir / "loss.csv", curve);
            spdlog::info("train: {} steps, final loss {}", curve.size(), curve.empty() ? 0.0 : curve.back().loss);
        };
    }

    // finetune
    std::string ft_model, ft_corpus, ft_previous;
    {
        auto& s = add("finetune", "Second-round fine-tuning of a trained student on a small parallel set");
        s.app->add_option("-m,--model", ft_model, "Checkpoint from train")->required();
        s.app->add_option("--corpus", ft_corpus, "Small high-quality parallel corpus")->required();
        s.app->add_option("--previous-loss", ft_previous, "First-round loss.csv; step numbering continues after it");
        config_flag(*s.app, s.common, "--steps", "train.second_round_steps", "Fine-tuning steps");
        config_flag(*s.app, s.common, "--lr", "train.lr", "Learning rate");
        config_flag(*s.app, s.common, "--src-side", "corpus.src_side", "Source side");
        config_flag(*s.app, s.common, "--tgt-side", "corpus.tgt_side", "Target side");
        s.body = [&](const PipelineConfig& cfg) {
            auto student = model::load_checkpoint(require_input(ft_model, "--model"));
            const auto in = require_input(ft_corpus, "--corpus");
            const auto examples = corpus_examples(student, corpus::load_corpus(in, input_format(cfg, in)), cfg, in);
            const auto previous =
                ft_previous.empty() ? model::LossCurve{} : model::load_loss_curve(require_input(ft_previous, "--previous-loss"));
            const auto curve = model::finetune(student, examples, cfg.train, previous);
            model::save_checkpoint(cfg.output_dir / "model.json", student);
            model::save_loss_curve(cfg.output_dir / "loss.csv", curve);
        };
    }

    // evaluate
    std::string ev_hyp, ev_ref, ev_model, ev_test;
    {
        auto& s = add("evaluate", "Corpus BLEU and chrF++ of hypothesis lines, or of a student on a test corpus");
        s.app->add_option("--hyp", ev_hyp, "Hypotheses, one sentence per line");
        s.app->add_option("--ref", ev_ref, "References, one sentence per line");
        s.app->add_option("-m,--model", ev_model, "Checkpoint to translate --test with");
        s.app->add_option("--test", ev_test, "Test corpus (src side translated, tgt side as reference)");
        config_flag(*s.app, s.common, "--tokenize", "bleu.tokenize", "BLEU tokenizer: 13a or none");
        config_flag(*s.app, s.common, "--smoothing", "bleu.smoothing", "BLEU smoothing: exp, floor, add-k, none");
        config_flag(*s.app, s.common, "--lowercase", "bleu.lowercase", "Lowercase for BLEU, true or false");
        s.body = [&](const PipelineConfig& cfg) {
            std::vector<std::string> hyps, refs;
            if (!ev_model.empty() || !ev_test.empty()) {
                if (!ev_hyp.empty() || !ev_ref.empty())
                    throw ConfigError("evaluate takes either --hyp/--ref or --model/--test");
                const auto student = model::load_checkpoint(require_input(ev_model, "--model"));
                const auto in = require_input(ev_test, "--test");
                const auto c = corpus::load_corpus(in, input_format(cfg, in));
                for (const auto& src : side_or_throw(c, cfg.src_side, in))
                    hyps.push_back(model::translate(student, src));
                refs = side_or_throw(c, cfg.tgt_side, in);
                write_lines(cfg.output_dir / "hypotheses.txt", hyps);
            } else {
                hyps = read_lines(require_input(ev_hyp, "--hyp"));
                refs = read_lines(require_input(ev_ref, "--ref"));
            }
            const auto j = scores_json(hyps, refs, cfg);
            write_json(cfg.output_dir / "scores.json", j);
            std::cout << j.dump(2) << '\n';
        };
    }

    // bench
    std::string bench_input, bench_model, bench_lexicon;
    std::optional<double> bench_stub;
    {
        auto& s = add("bench", "Per-sentence latency of one translator (student, toy teacher or sleep stub)");
        s.app->add_option("-i,--input", bench_input, "Sentences, one per line")->required();
        auto* m = s.app->add_option("-m,--model", bench_model, "Student checkpoint");
        auto* t = s.app->add_option("--lexicon", bench_lexicon, "Toy teacher lexicon");
        auto* st = s.app->add_option("--stub-ms", bench_stub, "Sleep stub with this delay per sentence");
        m->excludes(t)->excludes(st);
        t->excludes(st);
        config_flag(*s.app, s.common, "--warmup", "bench.warmup", "Untimed warmup passes");
        config_flag(*s.app, s.common, "--repetitions", "bench.repetitions", "Timed passes");
        config_flag(*s.app, s.common, "--threads", "bench.threads", "Must be 1; timing is single-threaded");
        s.body = [&](const PipelineConfig& cfg) {
            const auto sentences = read_lines(require_input(bench_input, "--input"));
            std::unique_ptr<bench::Translator> translator;
            if (!bench_model.empty()) {
                translator = std::make_unique<bench::StudentTranslator>(
                    model::load_checkpoint(require_input(bench_model, "--model")));
            } else if (!bench_lexicon.empty()) {
                translator = std::make_unique<bench::TeacherTranslator>(std::make_shared<distill::ToyTeacher>(
                    distill::load_toy_lexicon(require_input(bench_lexicon, "--lexicon")), cfg.teacher_alpha));
            } else if (bench_stub) {
                translator = std::make_unique<bench::SleepTranslator>(*bench_stub);
            } else {
                throw ConfigError("bench needs one of --model, --lexicon or --stub-ms");
            }
            const auto report = bench::bench_translate(*translator, sentences, cfg.bench);
            bench::save_report(cfg.output_dir / "bench.json", report);
            spdlog::info("bench: {} mean {:.6f} s, median {:.6f} s, p95 {:.6f} s per sentence", report.translator,
                         report.stats.mean, report.stats.median, report.stats.p95);
            if (!report.complete)
                throw Error("bench: translator failed: " + report.error);
        };
    }

    // experiment
    std::string exp_data;
    bool exp_prepare = false;
    {
        auto& s = add("experiment", "Toy distillation experiment: pseudo / distilled / ground-truth students, "
                                    "with and without second-round fine-tuning");
        s.app->add_option("--data-dir", exp_data, "Toy corpora directory (config paths.data_dir)");
        s.app->add_flag("--prepare", exp_prepare, "Generate the toy corpora into the data directory first");
        config_flag(*s.app, s.common, "--steps", "train.max_steps", "First-round steps per student");
        config_flag(*s.app, s.common, "--mode", "distill.mode", "sequence or token");
        s.body = [&](const PipelineConfig& cfg) {
            fs::path data = exp_data.empty() ? cfg.data_dir : fs::path(exp_data);
            if (data.empty())
                throw ConfigError("experiment needs --data-dir or paths.data_dir");
            if (exp_prepare) {
                distill::prepare_toy_corpora(data, cfg.toy);
                spdlog::info("experiment: toy corpora written to {}", data.string());
            }
            const auto report = distill::kd_experiment(data, cfg.experiment(), cfg.output_dir);
            distill::save_report(cfg.output_dir, report);
            distill::write_report_markdown(std::cout, report);
        };
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << '\n' << app.help();
        return kExitUsage;
    }

    for (auto& s : subs) {
        if (!s.app->parsed())
            continue;
        try {
            const auto cfg = prepare(s.common, s.app->get_name());
            s.body(cfg);
            return kExitOk;
        } catch (const ConfigError& e) {
            std::cerr << "lrmt " << s.app->get_name() << ": configuration error: " << e.what() << "\n\n"
                      << s.app->help();
            return kExitUsage;
        } catch (const std::exception& e) {
            std::cerr << "lrmt " << s.app->get_name() << ": error: " << e.what() << '\n';
            return kExitFailure;
        }
    }
    return kExitUsage;
}

} // namespace lrmt::cli
