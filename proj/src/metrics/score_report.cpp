#include "lrmt/metrics/score_report.hpp"

namespace lrmt::metrics {

nlohmann::ordered_json to_json(const ScoreReport& r) {
    nlohmann::ordered_json j;
    j["metric"] = r.metric;
    j["score"] = r.score;
    j["precisions"] = r.precisions;
    if (!r.recalls.empty())
        j["recalls"] = r.recalls;
    j["brevity_penalty"] = r.brevity_penalty;
    j["hyp_len"] = r.hyp_len;
    j["ref_len"] = r.ref_len;
    j["signature"] = r.signature;
    return j;
}

} // namespace lrmt::metrics
