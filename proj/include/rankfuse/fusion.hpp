#pragma once

/** \file fusion.hpp
 *  \brief Reciprocal Rank Fusion and modality-aware Weighted Reciprocal Rank
 *  Fusion over per-modality ranked lists.
 *
 * Fusion consumes only ranks. A document absent from one input list
 * contributes 0 for that list's term (equivalent to infinite rank); the
 * other term keeps its own weight. Ranks are 1-based, so k = 0 is
 * well-defined.
 */

#include <cstddef>
#include <vector>

#include "rankfuse/types.hpp"

namespace rankfuse::fusion {

/// score(d) = sum over lists containing d of 1/(rank + k). All lists must
/// share one qid; at least two lists; k >= 0. Entries beyond depth are
/// ignored; the output is canonicalized and truncated to output_size.
RankedList rrf_fuse(const std::vector<RankedList>& lists, double k,
                    std::size_t output_size, std::size_t depth = SIZE_MAX,
                    const std::string& run_tag = "rrf");

/// score(d) = alpha_d/(r_text + k) + (1 - alpha_d)/(r_vision + k), with
/// alpha_d from the weight table (default_alpha when absent).
RankedList wrrf_fuse(const RankedList& text, const RankedList& vision,
                     const WeightTable& weights, double k, std::size_t output_size,
                     std::size_t depth = SIZE_MAX, const std::string& run_tag = "wrrf");

}  // namespace rankfuse::fusion
