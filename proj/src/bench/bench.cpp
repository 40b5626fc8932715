#include "lrmt/bench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

#include "lrmt/error.hpp"

namespace lrmt::bench {

SleepTranslator::SleepTranslator(double milliseconds) : milliseconds_(milliseconds) {
    if (!(milliseconds_ >= 0))
        throw ConfigError("sleep translator: delay must be >= 0 ms");
}

std::string SleepTranslator::id() const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "sleep-stub(%gms)", milliseconds_);
    return buf;
}

std::string SleepTranslator::translate(const std::string& sentence) {
    std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(milliseconds_));
    return sentence;
}

StudentTranslator::StudentTranslator(model::StudentModel model, std::string id)
    : model_(std::move(model)), id_(std::move(id)) {}

std::string StudentTranslator::translate(const std::string& sentence) { return model::translate(model_, sentence); }

TeacherTranslator::TeacherTranslator(std::shared_ptr<const distill::Teacher> teacher) : teacher_(std::move(teacher)) {
    if (!teacher_)
        throw Error("teacher translator: null teacher");
}

std::string TeacherTranslator::translate(const std::string& sentence) {
    const auto out = teacher_->translate(sentence);
    if (!out)
        throw Error("teacher " + teacher_->id() + " failed to translate: " + sentence);
    std::string line;
    for (const auto& t : out->tokens)
        line += (line.empty() ? "" : " ") + t;
    return line;
}

void BenchConfig::validate() const {
    if (warmup < 0)
        throw ConfigError("bench: warmup must be >= 0");
    if (repetitions < 1)
        throw ConfigError("bench: repetitions must be >= 1");
    if (threads != 1)
        throw ConfigError("bench: timing is single-threaded; threads must be 1");
}

SampleStats summarize(std::vector<double> samples) {
    SampleStats s;
    if (samples.empty())
        return s;
    std::sort(samples.begin(), samples.end());
    const auto n = samples.size();
    s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    s.median = n % 2 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
    const double rank = 0.95 * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, n - 1);
    s.p95 = samples[lo] + (rank - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
    return s;
}

std::string hardware_descriptor() {
    std::string model = "unknown cpu";
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                model = line.substr(colon + 1);
                model.erase(0, model.find_first_not_of(' '));
            }
            break;
        }
    }
    return model + ", " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads";
}

BenchReport bench_translate(Translator& translator, const std::vector<std::string>& sentences,
                            const BenchConfig& config) {
    config.validate();
    if (sentences.empty())
        throw Error("bench: no sentences");
    using clock = std::chrono::steady_clock;

    BenchReport report;
    report.translator = translator.id();
    report.sentences = sentences.size();
    report.warmup = config.warmup;
    report.repetitions = config.repetitions;
    report.hardware = hardware_descriptor();
    report.samples.reserve(sentences.size() * static_cast<std::size_t>(config.repetitions));

    const auto start = clock::now();
    try {
        for (int w = 0; w < config.warmup; ++w)
            for (const auto& s : sentences)
                translator.translate(s);
        for (int r = 0; r < config.repetitions; ++r) {
            for (const auto& s : sentences) {
                const auto t0 = clock::now();
                translator.translate(s);
                const auto t1 = clock::now();
                report.samples.push_back(std::chrono::duration<double>(t1 - t0).count());
            }
        }
    } catch (const std::exception& e) {
        report.complete = false;
        report.error = e.what();
    }
    report.total_seconds = std::chrono::duration<double>(clock::now() - start).count();
    report.stats = summarize(report.samples);
    return report;
}

double speed_ratio(const BenchReport& a, const BenchReport& b) {
    if (!a.complete || !b.complete)
        throw Error("speed_ratio: incomplete bench report");
    if (!(a.stats.mean > 0))
        throw Error("speed_ratio: report '" + a.translator + "' has a non-positive mean");
    return b.stats.mean / a.stats.mean;
}

nlohmann::ordered_json to_json(const BenchReport& r) {
    nlohmann::ordered_json j;
    j["translator"] = r.translator;
    j["sentences"] = r.sentences;
    j["warmup"] = r.warmup;
    j["repetitions"] = r.repetitions;
    j["timed_scope"] = "full translate call per sentence, including tokenization";
    j["complete"] = r.complete;
    if (!r.complete)
        j["error"] = r.error;
    j["hardware"] = r.hardware;
    j["mean_s"] = r.stats.mean;
    j["median_s"] = r.stats.median;
    j["p95_s"] = r.stats.p95;
    j["total_s"] = r.total_seconds;
    j["samples_s"] = r.samples;
    return j;
}

BenchReport report_from_json(const nlohmann::json& j) {
    BenchReport r;
    r.translator = j.at("translator").get<std::string>();
    r.sentences = j.at("sentences").get<std::size_t>();
    r.warmup = j.at("warmup").get<int>();
    r.repetitions = j.at("repetitions").get<int>();
    r.complete = j.at("complete").get<bool>();
    r.error = j.value("error", "");
    r.hardware = j.at("hardware").get<std::string>();
    r.stats = {j.at("mean_s").get<double>(), j.at("median_s").get<double>(), j.at("p95_s").get<double>()};
    r.total_seconds = j.at("total_s").get<double>();
    r.samples = j.at("samples_s").get<std::vector<double>>();
    return r;
}

void save_report(const std::filesystem::path& path, const BenchReport& report) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write bench report " + path.string());
    out << to_json(report).dump(2) << '\n';
}

} // namespace lrmt::bench
