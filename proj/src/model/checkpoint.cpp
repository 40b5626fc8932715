#include "lrmt/model/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "lrmt/error.hpp"

namespace lrmt::model {

namespace {
constexpr const char* kFormat = "lrmt-student";
}

void write_checkpoint(std::ostream& out, const StudentModel& model) {
    nlohmann::ordered_json j;
    j["format"] = kFormat;
    j["version"] = kCheckpointVersion;
    j["config"] = {{"embed_dim", model.config.embed_dim},
                   {"hidden_dim", model.config.hidden_dim},
                   {"max_positions", model.config.max_positions},
                   {"init_scale", model.config.init_scale},
                   {"seed", model.config.seed}};
    j["src_vocab"] = model.src_vocab.tokens();
    j["tgt_vocab"] = model.tgt_vocab.tokens();
    auto& params = j["params"];
    params = nlohmann::ordered_json::object();
    const auto tensors = model.params.tensors();
    for (std::size_t i = 0; i < Parameters::kCount; ++i) {
        const auto& t = *tensors[i];
        std::vector<double> data;
        data.reserve(static_cast<std::size_t>(t.size()));
        for (Eigen::Index r = 0; r < t.rows(); ++r)
            for (Eigen::Index c = 0; c < t.cols(); ++c)
                data.push_back(t(r, c));
        params[std::string(Parameters::kNames[i])] = {{"rows", t.rows()}, {"cols", t.cols()}, {"data", data}};
    }
    out << j.dump() << '\n';
}

void save_checkpoint(const std::filesystem::path& path, const StudentModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write checkpoint " + path.string());
    write_checkpoint(out, model);
}

StudentModel read_checkpoint(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", "") != kFormat)
            throw Error("not a student checkpoint (format tag missing)");
        if (!j.contains("version"))
            throw Error("checkpoint has no version field");
        if (j.at("version").get<int>() != kCheckpointVersion)
            throw Error("unsupported checkpoint version " + j.at("version").dump());
        const auto& c = j.at("config");
        ModelConfig cfg;
        cfg.embed_dim = c.at("embed_dim").get<int>();
        cfg.hidden_dim = c.at("hidden_dim").get<int>();
        cfg.max_positions = c.at("max_positions").get<int>();
        cfg.init_scale = c.at("init_scale").get<double>();
        cfg.seed = c.at("seed").get<std::uint64_t>();
        auto model = StudentModel::create(cfg, Vocabulary::from_tokens(j.at("src_vocab").get<std::vector<std::string>>()),
                                          Vocabulary::from_tokens(j.at("tgt_vocab").get<std::vector<std::string>>()));
        const auto tensors = model.params.tensors();
        for (std::size_t i = 0; i < Parameters::kCount; ++i) {
            const std::string name(Parameters::kNames[i]);
            const auto& t = j.at("params").at(name);
            auto& dst = *tensors[i];
            if (t.at("rows").get<Eigen::Index>() != dst.rows() || t.at("cols").get<Eigen::Index>() != dst.cols())
                throw Error("checkpoint tensor '" + name + "' has unexpected shape");
            const auto data = t.at("data").get<std::vector<double>>();
            if (static_cast<Eigen::Index>(data.size()) != dst.size())
                throw Error("checkpoint tensor '" + name + "' has wrong element count");
            std::size_t k = 0;
            for (Eigen::Index r = 0; r < dst.rows(); ++r)
                for (Eigen::Index col = 0; col < dst.cols(); ++col)
                    dst(r, col) = data[k++];
        }
        if (!model.params.all_finite())
            throw Error("checkpoint contains non-finite parameters");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed checkpoint: ") + e.what());
    }
}

StudentModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open checkpoint " + path.string());
    return read_checkpoint(in);
}

} // namespace lrmt::model
