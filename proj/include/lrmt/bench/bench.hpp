#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrmt/distill/teacher.hpp"
#include "lrmt/model/student.hpp"

namespace lrmt::bench {

/// Anything that turns one sentence into one translation.
class Translator {
public:
    virtual ~Translator() = default;
    virtual std::string id() const = 0;
    virtual std::string translate(const std::string& sentence) = 0;
};

/// Sleeps a fixed time per sentence and echoes the input; for calibration.
class SleepTranslator final : public Translator {
public:
    explicit SleepTranslator(double milliseconds);
    std::string id() const override;
    std::string translate(const std::string& sentence) override;

private:
    double milliseconds_;
};

class StudentTranslator final : public Translator {
public:
    explicit StudentTranslator(model::StudentModel model, std::string id = "student");
    std::string id() const override { return id_; }
    std::string translate(const std::string& sentence) override;

private:
    model::StudentModel model_;
    std::string id_;
};

/// Wraps a teacher; a teacher failure is a translation failure.
class TeacherTranslator final : public Translator {
public:
    explicit TeacherTranslator(std::shared_ptr<const distill::Teacher> teacher);
    std::string id() const override { return teacher_->id(); }
    std::string translate(const std::string& sentence) override;

private:
    std::shared_ptr<const distill::Teacher> teacher_;
};

struct BenchConfig {
    int warmup = 3;
    int repetitions = 1;
    int threads = 1;  // only 1 is supported; timing is never parallelized

    void validate() const;
};

struct SampleStats {
    double mean = 0.0;
    double median = 0.0;
    double p95 = 0.0;
};

/// Mean, median and linearly interpolated 95th percentile.
SampleStats summarize(std::vector<double> samples);

/// Per-sentence wall-clock latency of the full translate call.
struct BenchReport {
    std::string translator;
    std::size_t sentences = 0;
    int warmup = 0;
    int repetitions = 0;
    std::vector<double> samples;  // seconds, sentence-major within each repetition
    SampleStats stats;
    double total_seconds = 0.0;
    std::string hardware;
    bool complete = true;
    std::string error;  // set when incomplete
};

/// Runs `warmup` untimed passes over all sentences, then times every
/// sentence individually `repetitions` times with a monotonic clock. A
/// translator failure yields a report flagged incomplete.
BenchReport bench_translate(Translator& translator, const std::vector<std::string>& sentences,
                            const BenchConfig& config);

/// How many times faster `a` is than `b`: mean_b / mean_a. Throws on an
/// incomplete report.
double speed_ratio(const BenchReport& a, const BenchReport& b);

/// CPU model name and hardware thread count.
std::string hardware_descriptor();

nlohmann::ordered_json to_json(const BenchReport& report);
BenchReport report_from_json(const nlohmann::json& j);
void save_report(const std::filesystem::path& path, const BenchReport& report);

} // namespace lrmt::bench
