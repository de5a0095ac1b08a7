#include "rankfuse/calibrate.hpp"

#include <algorithm>
#include <cmath>

namespace rankfuse::calib {

std::map<std::string, double> calibration_scores(const dense::DenseIndex& index,
                                                 std::span<const float> probe_vec) {
    const auto frame_scores = index.score_frames(probe_vec);
    const auto video_scores = index.max_frame_aggregate(frame_scores);
    std::map<std::string, double> raw;
    for (std::size_t v = 0; v < index.doc_ids().size(); ++v) {
        raw.emplace(index.doc_ids()[v], video_scores[v]);
    }
    return raw;
}

WeightTable scores_to_alphas(const std::map<std::string, double>& raw, const AlphaParams& params) {
    if (raw.empty()) throw ValidationError("no raw calibration scores");

    WeightTable table;
    table.default_alpha = 0.5;

    if (params.mode == AlphaMode::Fixed) {
        if (!(params.fixed_value >= 0.0 && params.fixed_value <= 1.0)) {
            throw std::invalid_argument("fixed alpha must lie in [0,1]");
        }
        for (const auto& [doc_id, score] : raw) {
            if (!std::isfinite(score)) {
                throw ValidationError("non-finite raw score for '" + doc_id + "'");
            }
            table.alphas.emplace(doc_id, params.fixed_value);
        }
        return table;
    }

    double lo = raw.begin()->second;
    double hi = lo;
    for (const auto& [doc_id, score] : raw) {
        if (!std::isfinite(score)) {
            throw ValidationError("non-finite raw score for '" + doc_id + "'");
        }
        lo = std::min(lo, score);
        hi = std::max(hi, score);
    }
    if (lo == hi) {
        for (const auto& [doc_id, score] : raw) table.alphas.emplace(doc_id, 0.5);
        return table;
    }
    const double range = hi - lo;
    for (const auto& [doc_id, score] : raw) {
        const double alpha = std::clamp((score - lo) / range, 0.0, 1.0);
        table.alphas.emplace(doc_id, alpha);
    }
    return table;
}

}  // namespace rankfuse::calib
