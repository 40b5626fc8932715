#include "lrmt/cli/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "lrmt/error.hpp"
#include "lrmt/random.hpp"
#include "lrmt/text/utf8.hpp"

namespace lrmt::cli {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"run", {"seed", "output_dir"}},
        {"paths", {"corpus", "dictionary", "golden", "data_dir", "lexicon"}},
        {"corpus", {"min_chars", "max_chars", "sides", "format", "src_side", "tgt_side"}},
        {"eifeler", {"vowels", "retain_before", "exceptions", "pause_marks", "retain_at_pause"}},
        {"bleu", {"max_order", "weights", "smoothing", "smooth_value", "tokenize", "effective_order", "lowercase"}},
        {"chrf", {"char_order", "word_order", "beta", "whitespace", "eps_smoothing", "lowercase"}},
        {"model", {"embed_dim", "hidden_dim", "max_positions", "init_scale"}},
        {"train", {"lr", "weight_decay", "batch_size", "max_steps", "second_round_steps", "beta1", "beta2", "eps"}},
        {"distill", {"mode", "temperature", "teacher_alpha", "max_failure_rate"}},
        {"bench", {"warmup", "repetitions", "threads"}},
        {"toy", {"concepts", "dictionary_coverage", "train_size", "finetune_size", "test_size"}},
    };
    return keys;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string chars_of(const std::set<char32_t>& set) {
    std::string s;
    for (char32_t cp : set)
        text::append_utf8(s, cp);
    return s;
}

std::set<char32_t> set_of(const std::string& s) {
    const auto cps = text::decode(s);
    return {cps.begin(), cps.end()};
}

std::vector<std::string> words_of(const std::string& s, char extra_sep = ' ') {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == extra_sep) {
            if (!cur.empty())
                out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(std::move(cur));
    return out;
}

class Reader {
public:
    explicit Reader(const Ptree& tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string& key) const {
        if (const auto v = tree_.get_optional<std::string>(Ptree::path_type(key, '.')))
            return *v;
        return std::nullopt;
    }

    void str(const std::string& key, std::string& out) const {
        if (auto v = raw(key))
            out = *v;
    }
    void path(const std::string& key, std::filesystem::path& out) const {
        if (auto v = raw(key))
            out = *v;
    }
    template <typename Int>
    void integer(const std::string& key, Int& out) const {
        if (auto v = raw(key)) {
            Int parsed{};
            const auto res = std::from_chars(v->data(), v->data() + v->size(), parsed);
            if (res.ec != std::errc() || res.ptr != v->data() + v->size())
                throw ConfigError("config key " + key + ": not an integer: '" + *v + "'");
            out = parsed;
        }
    }
    void real(const std::string& key, double& out) const {
        if (auto v = raw(key)) {
            double parsed = 0;
            const auto res = std::from_chars(v->data(), v->data() + v->size(), parsed);
            if (res.ec != std::errc() || res.ptr != v->data() + v->size())
                throw ConfigError("config key " + key + ": not a number: '" + *v + "'");
            out = parsed;
        }
    }
    void boolean(const std::string& key, bool& out) const {
        if (auto v = raw(key)) {
            if (*v == "true")
                out = true;
            else if (*v == "false")
                out = false;
            else
                throw ConfigError("config key " + key + ": expected true or false, got '" + *v + "'");
        }
    }

private:
    const Ptree& tree_;
};

} // namespace

void PipelineConfig::apply_seed() {
    model.seed = derive_seed(seed, 1);
    train.seed = derive_seed(seed, 2);
    toy.seed = derive_seed(seed, 3);
}

void PipelineConfig::validate() const {
    filter.validate();
    if (corpus_format != "auto")
        corpus::parse_format(corpus_format);
    eifeler.validate();
    bleu.validate();
    chrf.validate();
    model.validate();
    train.validate();
    bench.validate();
    toy.validate();
    experiment().validate();
}

distill::ExperimentConfig PipelineConfig::experiment() const {
    distill::ExperimentConfig c;
    c.seed = seed;
    c.model = model;
    c.train = train;
    c.kd_mode = kd_mode;
    c.temperature = temperature;
    c.teacher_alpha = teacher_alpha;
    c.max_failure_rate = max_failure_rate;
    c.rule = eifeler;
    c.bleu = bleu;
    c.chrf = chrf;
    return c;
}

PipelineConfig from_ptree(const Ptree& tree) {
    const auto& known = known_keys();
    for (const auto& [section, body] : tree) {
        const auto it = known.find(section);
        if (it == known.end())
            throw ConfigError("unknown config section [" + section + "]");
        if (!body.data().empty())
            throw ConfigError("config key '" + section + "' must be inside a section");
        for (const auto& [key, value] : body)
            if (!it->second.contains(key))
                throw ConfigError("unknown config key " + section + "." + key);
    }

    PipelineConfig c;
    const Reader r(tree);
    r.integer("run.seed", c.seed);
    r.path("run.output_dir", c.output_dir);

    r.path("paths.corpus", c.corpus);
    r.path("paths.dictionary", c.dictionary);
    r.path("paths.golden", c.golden);
    r.path("paths.data_dir", c.data_dir);
    r.path("paths.lexicon", c.lexicon);

    r.integer("corpus.min_chars", c.filter.min_chars);
    r.integer("corpus.max_chars", c.filter.max_chars);
    if (auto v = r.raw("corpus.sides")) {
        c.filter.sides.clear();
        for (const auto& name : words_of(*v, ','))
            c.filter.sides.push_back(corpus::parse_side(name));
    }
    r.str("corpus.format", c.corpus_format);
    if (auto v = r.raw("corpus.src_side"))
        c.src_side = corpus::parse_side(*v);
    if (auto v = r.raw("corpus.tgt_side"))
        c.tgt_side = corpus::parse_side(*v);

    if (auto v = r.raw("eifeler.vowels"))
        c.eifeler.vowels = set_of(*v);
    if (auto v = r.raw("eifeler.retain_before"))
        c.eifeler.retain_before = set_of(*v);
    if (auto v = r.raw("eifeler.exceptions")) {
        c.eifeler.exceptions.clear();
        for (const auto& w : words_of(*v))
            c.eifeler.exceptions.insert(text::casefold(w));
    }
    if (auto v = r.raw("eifeler.pause_marks"))
        c.eifeler.pause_marks = set_of(*v);
    r.boolean("eifeler.retain_at_pause", c.eifeler.retain_at_pause);

    r.integer("bleu.max_order", c.bleu.max_order);
    if (auto v = r.raw("bleu.weights")) {
        c.bleu.weights.clear();
        for (const auto& w : words_of(*v, ',')) {
            double x = 0;
            const auto res = std::from_chars(w.data(), w.data() + w.size(), x);
            if (res.ec != std::errc() || res.ptr != w.data() + w.size())
                throw ConfigError("config key bleu.weights: not a number: '" + w + "'");
            c.bleu.weights.push_back(x);
        }
    }
    if (auto v = r.raw("bleu.smoothing"))
        c.bleu.smoothing = metrics::parse_smoothing(*v);
    r.real("bleu.smooth_value", c.bleu.smooth_value);
    r.str("bleu.tokenize", c.bleu.tokenizer);
    r.boolean("bleu.effective_order", c.bleu.effective_order);
    r.boolean("bleu.lowercase", c.bleu.lowercase);

    r.integer("chrf.char_order", c.chrf.char_order);
    r.integer("chrf.word_order", c.chrf.word_order);
    r.real("chrf.beta", c.chrf.beta);
    r.boolean("chrf.whitespace", c.chrf.whitespace);
    r.boolean("chrf.eps_smoothing", c.chrf.eps_smoothing);
    r.boolean("chrf.lowercase", c.chrf.lowercase);

    r.integer("model.embed_dim", c.model.embed_dim);
    r.integer("model.hidden_dim", c.model.hidden_dim);
    r.integer("model.max_positions", c.model.max_positions);
    r.real("model.init_scale", c.model.init_scale);

    r.real("train.lr", c.train.lr);
    r.real("train.weight_decay", c.train.weight_decay);
    r.integer("train.batch_size", c.train.batch_size);
    r.integer("train.max_steps", c.train.max_steps);
    r.integer("train.second_round_steps", c.train.second_round_steps);
    r.real("train.beta1", c.train.beta1);
    r.real("train.beta2", c.train.beta2);
    r.real("train.eps", c.train.eps);

    if (auto v = r.raw("distill.mode"))
        c.kd_mode = distill::parse_kd_mode(*v);
    r.real("distill.temperature", c.temperature);
    r.real("distill.teacher_alpha", c.teacher_alpha);
    r.real("distill.max_failure_rate", c.max_failure_rate);

    r.integer("bench.warmup", c.bench.warmup);
    r.integer("bench.repetitions", c.bench.repetitions);
    r.integer("bench.threads", c.bench.threads);

    r.integer("toy.concepts", c.toy.concepts);
    r.real("toy.dictionary_coverage", c.toy.dictionary_coverage);
    r.integer("toy.train_size", c.toy.train_size);
    r.integer("toy.finetune_size", c.toy.finetune_size);
    r.integer("toy.test_size", c.toy.test_size);

    c.apply_seed();
    c.validate();
    return c;
}

Ptree to_ptree(const PipelineConfig& c) {
    Ptree t;
    auto put = [&t](const std::string& key, const std::string& value) {
        t.put(Ptree::path_type(key, '.'), value);
    };
    auto put_bool = [&put](const std::string& key, bool v) { put(key, v ? "true" : "false"); };

    put("run.seed", std::to_string(c.seed));
    put("run.output_dir", c.output_dir.string());

    put("paths.corpus", c.corpus.string());
    put("paths.dictionary", c.dictionary.string());
    put("paths.golden", c.golden.string());
    put("paths.data_dir", c.data_dir.string());
    put("paths.lexicon", c.lexicon.string());

    put("corpus.min_chars", std::to_string(c.filter.min_chars));
    put("corpus.max_chars", std::to_string(c.filter.max_chars));
    std::string sides;
    for (auto s : c.filter.sides)
        sides += (sides.empty() ? "" : ",") + std::string(corpus::side_key(s));
    put("corpus.sides", sides);
    put("corpus.format", c.corpus_format);
    put("corpus.src_side", corpus::side_key(c.src_side));
    put("corpus.tgt_side", corpus::side_key(c.tgt_side));

    put("eifeler.vowels", chars_of(c.eifeler.vowels));
    put("eifeler.retain_before", chars_of(c.eifeler.retain_before));
    std::string exceptions;
    for (const auto& w : c.eifeler.exceptions)
        exceptions += (exceptions.empty() ? "" : " ") + w;
    put("eifeler.exceptions", exceptions);
    put("eifeler.pause_marks", chars_of(c.eifeler.pause_marks));
    put_bool("eifeler.retain_at_pause", c.eifeler.retain_at_pause);

    put("bleu.max_order", std::to_string(c.bleu.max_order));
    std::string weights;
    for (double w : c.bleu.weights)
        weights += (weights.empty() ? "" : ",") + format_double(w);
    put("bleu.weights", weights);
    put("bleu.smoothing", metrics::smoothing_name(c.bleu.smoothing));
    put("bleu.smooth_value", format_double(c.bleu.smooth_value));
    put("bleu.tokenize", c.bleu.tokenizer);
    put_bool("bleu.effective_order", c.bleu.effective_order);
    put_bool("bleu.lowercase", c.bleu.lowercase);

    put("chrf.char_order", std::to_string(c.chrf.char_order));
    put("chrf.word_order", std::to_string(c.chrf.word_order));
    put("chrf.beta", format_double(c.chrf.beta));
    put_bool("chrf.whitespace", c.chrf.whitespace);
    put_bool("chrf.eps_smoothing", c.chrf.eps_smoothing);
    put_bool("chrf.lowercase", c.chrf.lowercase);

    put("model.embed_dim", std::to_string(c.model.embed_dim));
    put("model.hidden_dim", std::to_string(c.model.hidden_dim));
    put("model.max_positions", std::to_string(c.model.max_positions));
    put("model.init_scale", format_double(c.model.init_scale));

    put("train.lr", format_double(c.train.lr));
    put("train.weight_decay", format_double(c.train.weight_decay));
    put("train.batch_size", std::to_string(c.train.batch_size));
    put("train.max_steps", std::to_string(c.train.max_steps));
    put("train.second_round_steps", std::to_string(c.train.second_round_steps));
    put("train.beta1", format_double(c.train.beta1));
    put("train.beta2", format_double(c.train.beta2));
    put("train.eps", format_double(c.train.eps));

    put("distill.mode", distill::kd_mode_name(c.kd_mode));
    put("distill.temperature", format_double(c.temperature));
    put("distill.teacher_alpha", format_double(c.teacher_alpha));
    put("distill.max_failure_rate", format_double(c.max_failure_rate));

    put("bench.warmup", std::to_string(c.bench.warmup));
    put("bench.repetitions", std::to_string(c.bench.repetitions));
    put("bench.threads", std::to_string(c.bench.threads));

    put("toy.concepts", std::to_string(c.toy.concepts));
    put("toy.dictionary_coverage", format_double(c.toy.dictionary_coverage));
    put("toy.train_size", std::to_string(c.toy.train_size));
    put("toy.finetune_size", std::to_string(c.toy.finetune_size));
    put("toy.test_size", std::to_string(c.toy.test_size));
    return t;
}

Ptree read_config_tree(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    Ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config file " + path.string() + ": " + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
    }
    return tree;
}

void apply_override(Ptree& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq || dot == 0 || dot + 1 == eq)
        throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
    tree.put(Ptree::path_type(assignment.substr(0, eq), '.'), assignment.substr(eq + 1));
}

PipelineConfig resolve_config(const std::optional<std::filesystem::path>& file,
                              const std::vector<std::string>& overrides) {
    Ptree tree;
    std::optional<std::filesystem::path> source = file;
    if (!source) {
        if (const char* env = std::getenv(kConfigEnvVar); env && *env)
            source = env;
    }
    if (source)
        tree = read_config_tree(*source);
    for (const auto& o : overrides)
        apply_override(tree, o);
    return from_ptree(tree);
}

void write_config(std::ostream& out, const PipelineConfig& config) {
    boost::property_tree::write_ini(out, to_ptree(config));
}

void save_config(const std::filesystem::path& path, const PipelineConfig& config) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write config " + path.string());
    write_config(out, config);
}

} // namespace lrmt::cli
