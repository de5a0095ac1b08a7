#pragma once

/** \file calibrate.hpp
 *  \brief Per-video fusion weights from the MaxFrame score of a fixed probe
 *  query, computed at indexing time.
 *
 * A high probe score marks a news-like video, which gets a high alpha and
 * therefore more weight on the text modality. The probe embedding is
 * produced externally and supplied as a one-frame query store.
 */

#include <map>
#include <span>
#include <string>

#include "rankfuse/dense.hpp"
#include "rankfuse/types.hpp"

namespace rankfuse::calib {

/// The calibration query whose embedding drives the weighting.
inline constexpr const char* kDefaultProbeText =
    "news anchor live coverage broadcast microphone breaking news";

enum class AlphaMode { MinMax, Fixed };

struct AlphaParams {
    AlphaMode mode{AlphaMode::MinMax};
    double fixed_value{0.5};  // used when mode == Fixed
};

/// Raw MaxFrame score of the probe for every video in the index.
std::map<std::string, double> calibration_scores(const dense::DenseIndex& index,
                                                 std::span<const float> probe_vec);

/// Map raw scores to alphas. MinMax: (s - min)/(max - min), all 0.5 when the
/// range is degenerate. Fixed: the given constant for every video. The
/// resulting table's default_alpha is 0.5.
WeightTable scores_to_alphas(const std::map<std::string, double>& raw, const AlphaParams& params);

}  // namespace rankfuse::calib
