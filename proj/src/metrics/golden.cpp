#include "lrmt/metrics/golden.hpp"

#include <fstream>

#include <json.hpp>

#include "lrmt/error.hpp"

namespace lrmt::metrics {

std::vector<GoldenVector> load_golden_vectors(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open golden vector file " + path.string());
    std::vector<GoldenVector> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto where = path.string() + ":" + std::to_string(lineno) + ": ";
        try {
            const auto j = nlohmann::json::parse(line);
            GoldenVector g{j.at("hyp").get<std::string>(), j.at("ref").get<std::string>(),
                           j.at("bleu").get<double>(), j.at("chrfpp").get<double>(),
                           j.at("version").get<std::string>()};
            if (g.bleu < 0 || g.bleu > 100 || g.chrfpp < 0 || g.chrfpp > 100)
                throw Error(where + "score outside [0, 100]");
            if (g.version.empty())
                throw Error(where + "empty scorer version");
            out.push_back(std::move(g));
        } catch (const nlohmann::json::exception& e) {
            throw Error(where + e.what());
        }
    }
    return out;
}

} // namespace lrmt::metrics
