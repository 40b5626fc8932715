#include "lrmt/distill/soft_targets.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "lrmt/error.hpp"

namespace lrmt::distill {

void validate_record(const SoftTargetRecord& record) {
    const std::string where = "soft target '" + record.id + "'";
    if (record.hypothesis.empty())
        throw Error(where + ": empty hypothesis");
    if (!record.distributions)
        return;
    const auto& rows = *record.distributions;
    if (rows.size() != record.hypothesis.size())
        throw Error(where + ": " + std::to_string(rows.size()) + " distribution rows for " +
                    std::to_string(record.hypothesis.size()) + " hypothesis tokens");
    for (std::size_t t = 0; t < rows.size(); ++t) {
        double sum = 0.0;
        for (const auto& [tok, p] : rows[t]) {
            if (!(p >= 0.0 && p <= 1.0 + 1e-12))
                throw Error(where + ": probability out of range at position " + std::to_string(t));
            sum += p;
        }
        if (!(std::abs(sum - 1.0) <= 1e-4))
            throw Error(where + ": distribution at position " + std::to_string(t) + " sums to " +
                        std::to_string(sum));
    }
}

namespace {

nlohmann::ordered_json record_to_json(const SoftTargetRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["src"] = r.source;
    j["hyp"] = r.hypothesis;
    if (r.distributions) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : *r.distributions) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (const auto& [tok, p] : row)
                obj[tok] = p;
            rows.push_back(std::move(obj));
        }
        j["dist"] = std::move(rows);
    }
    j["teacher"] = r.teacher;
    return j;
}

SoftTargetRecord record_from_json(const nlohmann::json& j) {
    SoftTargetRecord r;
    r.id = j.at("id").get<std::string>();
    r.source = j.at("src").get<std::string>();
    r.hypothesis = j.at("hyp").get<std::vector<std::string>>();
    r.teacher = j.at("teacher").get<std::string>();
    if (const auto it = j.find("dist"); it != j.end() && !it->is_null()) {
        std::vector<TokenDistribution> rows;
        for (const auto& obj : *it) {
            if (!obj.is_object())
                throw Error("distribution row is not an object");
            TokenDistribution row;
            for (const auto& [tok, p] : obj.items())
                row.emplace_back(tok, p.get<double>());
            rows.push_back(std::move(row));
        }
        r.distributions = std::move(rows);
    }
    return r;
}

} // namespace

std::vector<SoftTargetRecord> read_soft_targets(std::istream& in) {
    std::vector<SoftTargetRecord> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty())
            continue;
        try {
            out.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw Error("soft targets line " + std::to_string(number) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("soft targets line " + std::to_string(number) + ": " + e.what());
        }
        validate_record(out.back());
    }
    return out;
}

std::vector<SoftTargetRecord> load_soft_targets(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open soft targets " + path.string());
    return read_soft_targets(in);
}

void write_soft_targets(std::ostream& out, const std::vector<SoftTargetRecord>& records) {
    for (const auto& r : records) {
        validate_record(r);
        out << record_to_json(r).dump() << '\n';
    }
}

void save_soft_targets(const std::filesystem::path& path, const std::vector<SoftTargetRecord>& records) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write soft targets " + path.string());
    write_soft_targets(out, records);
}

GenerationResult generate_soft_targets(const Teacher& teacher, const std::vector<SourceSentence>& sources,
                                       double max_failure_rate) {
    if (sources.empty())
        throw Error("generate_soft_targets: no source sentences");
    GenerationResult result;
    const auto teacher_id = teacher.id();
    const bool with_dist = teacher.provides_distributions();
    const auto start = std::chrono::steady_clock::now();

    for (const auto& src : sources) {
        std::optional<TeacherOutput> out;
        std::string reason = "teacher returned no translation";
        try {
            out = teacher.translate(src.text);
        } catch (const Error& e) {
            reason = e.what();
        }
        if (out && out->tokens.empty()) {
            out.reset();
            reason = "empty hypothesis";
        }
        if (!out) {
            spdlog::warn("soft targets: skipping '{}': {}", src.id, reason);
            result.failed_ids.push_back(src.id);
            continue;
        }
        SoftTargetRecord rec{src.id, src.text, std::move(out->tokens), std::nullopt, teacher_id};
        if (with_dist)
            rec.distributions = std::move(out->distributions);
        validate_record(rec);
        result.records.push_back(std::move(rec));
    }

    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.sentences_per_second =
        result.seconds > 0 ? static_cast<double>(sources.size()) / result.seconds : 0.0;
    spdlog::info("soft targets: {} of {} sentences in {:.3f} s ({:.1f} sentences/s), teacher {}",
                 result.records.size(), sources.size(), result.seconds, result.sentences_per_second, teacher_id);

    const double rate = static_cast<double>(result.failed_ids.size()) / static_cast<double>(sources.size());
    if (rate > max_failure_rate)
        throw Error("soft targets: teacher failed on " + std::to_string(result.failed_ids.size()) + " of " +
                    std::to_string(sources.size()) + " sentences (first: '" + result.failed_ids.front() + "')");
    return result;
}

} // namespace lrmt::distill
