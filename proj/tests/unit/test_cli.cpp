#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "lrmt/cli/commands.hpp"
#include "lrmt/cli/config.hpp"
#include "lrmt/error.hpp"

using namespace lrmt;
using namespace lrmt::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("lrmt_cli_" + name + "_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "lrmt");
    args.push_back("--log-level");
    args.push_back("off");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

/// Runs the built binary and returns (exit status, stdout).
std::pair<int, std::string> shell(const std::string& args) {
    const std::string command = std::string(LRMT_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(command.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
        out.append(buf, n);
    const int status = ::pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(read_file(p)); }

std::size_t count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line))
        ++n;
    return n;
}

std::string sentence_of_length(std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i)
        s += (i % 6 == 5) ? ' ' : 'a';
    return s;
}

/// The ten-record corpus whose en lengths straddle the default bounds.
fs::path ten_record_corpus(const fs::path& dir) {
    std::string text;
    for (std::size_t n : {10, 49, 50, 100, 250, 499, 500, 501, 600, 1000})
        text += nlohmann::json{{"id", std::to_string(n)}, {"en", sentence_of_length(n)}}.dump() + "\n";
    const auto p = dir / "ten.jsonl";
    write_file(p, text);
    return p;
}

} // namespace

TEST(Config, EffectiveConfigLoadsBackToTheSameTree) {
    const auto cfg = resolve_config(fs::path(LRMT_CONFIGS) / "toy.ini", {"bleu.lowercase=true", "train.lr=0.00125"});
    EXPECT_EQ(cfg.model.embed_dim, 32);
    EXPECT_EQ(cfg.train.lr, 0.00125);
    std::ostringstream first;
    write_config(first, cfg);
    TempDir dir("roundtrip");
    save_config(dir.path / kEffectiveConfigFile, cfg);
    const auto back = from_ptree(read_config_tree(dir.path / kEffectiveConfigFile));
    std::ostringstream second;
    write_config(second, back);
    EXPECT_EQ(first.str(), second.str());
    EXPECT_TRUE(to_ptree(back) == to_ptree(cfg));
}

TEST(Config, UnknownKeysAndSectionsAreErrors) {
    Ptree tree;
    tree.put("train.learning_rate", "0.1");
    EXPECT_THROW(from_ptree(tree), ConfigError);
    Ptree section;
    section.put("optimizer.lr", "0.1");
    EXPECT_THROW(from_ptree(section), ConfigError);
    Ptree value;
    value.put("train.lr", "fast");
    EXPECT_THROW(from_ptree(value), ConfigError);
    Ptree ok;
    EXPECT_THROW(apply_override(ok, "no-equals-sign"), ConfigError);
}

TEST(Config, SeedFlowsIntoDerivedStreams) {
    const auto a = resolve_config(std::nullopt, {"run.seed=3"});
    const auto b = resolve_config(std::nullopt, {"run.seed=4"});
    EXPECT_NE(a.model.seed, b.model.seed);
    EXPECT_NE(a.model.seed, a.train.seed);
    EXPECT_EQ(a.model.seed, resolve_config(std::nullopt, {"run.seed=3"}).model.seed);
}

TEST(Config, EnvironmentVariableNamesTheDefaultFile) {
    TempDir dir("env");
    write_file(dir.path / "env.ini", "[run]\nseed = 42\n");
    ::setenv(kConfigEnvVar, (dir.path / "env.ini").c_str(), 1);
    const auto from_env = resolve_config(std::nullopt, {});
    ::unsetenv(kConfigEnvVar);
    EXPECT_EQ(from_env.seed, 42u);
    EXPECT_EQ(resolve_config(std::nullopt, {}).seed, PipelineConfig{}.seed);
}

TEST(Cli, FlagsWinOverSetAndFile) {
    TempDir dir("precedence");
    write_file(dir.path / "c.ini", "[run]\nseed = 5\n[corpus]\nmin_chars = 10\n");
    const auto corpus = ten_record_corpus(dir.path);
    const auto out = dir.path / "out";
    ASSERT_EQ(run_cli({"corpus-filter", "-c", (dir.path / "c.ini").string(), "--set", "run.seed=6", "--set",
                   "corpus.min_chars=20", "--seed", "7", "--min", "50", "-i", corpus.string(), "-o", out.string()}),
              0);
    const auto eff = from_ptree(read_config_tree(out / kEffectiveConfigFile));
    EXPECT_EQ(eff.seed, 7u);
    EXPECT_EQ(eff.filter.min_chars, 50u);
    // --set beats the file when no flag is given.
    ASSERT_EQ(run_cli({"corpus-stats", "-c", (dir.path / "c.ini").string(), "--set", "run.seed=6", "-i", corpus.string(),
                   "-o", out.string()}),
              0);
    EXPECT_EQ(from_ptree(read_config_tree(out / kEffectiveConfigFile)).seed, 6u);
}

TEST(Cli, FilterKeepsFiveOfTheTenRecordCorpus) {
    TempDir dir("filter");
    const auto corpus = ten_record_corpus(dir.path);
    ASSERT_EQ(run_cli({"corpus-filter", "--min", "50", "--max", "500", "-i", corpus.string(), "-o", dir.path.string()}), 0);
    EXPECT_EQ(count_lines(dir.path / "filtered.jsonl"), 5u);
    const auto report = read_json(dir.path / "filter_report.json");
    EXPECT_EQ(report.at("kept").get<int>(), 5);
}

TEST(Cli, EvaluateIdentityScoresHundred) {
    TempDir dir("evaluate");
    write_file(dir.path / "h.txt", "the cat sat on the mat\nKatze an Hund sinn hei .\n");
    ASSERT_EQ(run_cli({"evaluate", "--hyp", (dir.path / "h.txt").string(), "--ref", (dir.path / "h.txt").string(), "-o",
                   dir.path.string()}),
              0);
    const auto j = read_json(dir.path / "scores.json");
    EXPECT_EQ(j.at("bleu").get<double>(), 100.0);
    EXPECT_EQ(j.at("chrfpp").get<double>(), 100.0);
    EXPECT_EQ(j.at("sentences").get<int>(), 2);
}

TEST(Cli, PseudoTranslateIsByteDeterministic) {
    TempDir dir("pseudo");
    write_file(dir.path / "dict.tsv", "und\tan\nder\tde\n");
    write_file(dir.path / "c.jsonl", R"({"id":"1","de":"Katze und Hund","en":"cat and dog"})"
                                     "\n"
                                     R"({"id":"2","de":"der Mann und die Frau","en":"the man and the woman"})"
                                     "\n");
    for (const char* run_dir : {"a", "b"})
        ASSERT_EQ(run_cli({"pseudo-translate", "-i", (dir.path / "c.jsonl").string(), "-d",
                       (dir.path / "dict.tsv").string(), "-o", (dir.path / run_dir).string()}),
                  0);
    const auto a = read_file(dir.path / "a" / "pseudo.jsonl");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, read_file(dir.path / "b" / "pseudo.jsonl"));
    EXPECT_NE(a.find("Katze an Hund"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    TempDir dir("exit");
    EXPECT_EQ(run_cli({"no-such-command"}), kExitUsage);
    EXPECT_EQ(run_cli({"corpus-stats", "-o", dir.path.string()}), kExitUsage);  // required -i missing
    EXPECT_EQ(run_cli({"corpus-stats", "-i", (dir.path / "absent.jsonl").string(), "-o", dir.path.string()}), kExitUsage);
    EXPECT_EQ(run_cli({"corpus-stats", "-i", ten_record_corpus(dir.path).string(), "--set", "train.lr=-1", "-o",
                   dir.path.string()}),
              kExitUsage);
    write_file(dir.path / "broken.jsonl", "{\"id\":\"1\",\"en\":\"ok\"}\nnot json\n");
    EXPECT_EQ(run_cli({"corpus-stats", "-i", (dir.path / "broken.jsonl").string(), "-o", dir.path.string()}),
              kExitFailure);
    EXPECT_EQ(run_cli({"corpus-stats", "-i", ten_record_corpus(dir.path).string(), "-o", dir.path.string()}), kExitOk);
    EXPECT_EQ(run_cli({"bench", "-i", (dir.path / "broken.jsonl").string(), "--stub-ms", "0", "--threads", "4", "-o",
                   dir.path.string()}),
              kExitUsage);
}

TEST(Cli, HelpOnEverySubcommandExitsZeroAndListsItsFlags) {
    const std::vector<std::pair<std::string, std::vector<std::string>>> expected = {
        {"corpus-filter", {"--input", "--min", "--max", "--sides", "--format"}},
        {"corpus-stats", {"--input", "--format"}},
        {"pseudo-build-dict", {"--input"}},
        {"pseudo-translate", {"--input", "--dictionary", "--exceptions", "--retain-at-pause"}},
        {"distill-generate", {"--input", "--lexicon", "--alpha", "--max-failure-rate", "--src-side"}},
        {"train", {"--corpus", "--soft-targets", "--vocab-corpus", "--mode", "--temperature", "--steps", "--lr"}},
        {"finetune", {"--model", "--corpus", "--previous-loss", "--steps"}},
        {"evaluate", {"--hyp", "--ref", "--model", "--test", "--tokenize"}},
        {"bench", {"--input", "--model", "--lexicon", "--stub-ms", "--warmup", "--repetitions", "--threads"}},
        {"experiment", {"--data-dir", "--prepare", "--steps", "--mode"}},
    };
    for (const auto& [command, flags] : expected) {
        const auto [status, text] = shell(command + " --help");
        EXPECT_EQ(status, 0) << command;
        for (const auto& flag : std::vector<std::string>{"--config", "--set", "--seed", "--output-dir", "--log-level"})
            EXPECT_NE(text.find(flag), std::string::npos) << command << " " << flag;
        for (const auto& flag : flags)
            EXPECT_NE(text.find(flag), std::string::npos) << command << " " << flag;
    }
    EXPECT_EQ(shell("--help").first, 0);
    EXPECT_EQ(shell("").first, kExitUsage);
}
