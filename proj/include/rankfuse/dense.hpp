#pragma once

/** \file dense.hpp
 *  \brief Exact brute-force dense retrieval over frame embeddings with
 *  MaxFrame aggregation to video-level scores.
 *
 * Similarity is the inner product of unit vectors (cosine). Scoring runs in
 * 32-bit accumulation; the per-video max comparison is held in 64 bits. No
 * approximate structures: collections at this scale are tractable exactly,
 * and exactness keeps the MaxFrame properties testable.
 */

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rankfuse/types.hpp"

namespace rankfuse::dense {

/** \brief Flat matrix of all frame vectors plus frame -> video ownership. */
class DenseIndex {
public:
    /// Rows must already be unit-normalized (the io reader guarantees this).
    static DenseIndex build(const std::vector<FrameEmbeddings>& videos);

    /// Inner product of the query with every frame row. The query is
    /// L2-normalized internally if needed; a zero-norm query is an error.
    /// n_threads > 1 partitions the frame matrix; results are independent
    /// of the partitioning.
    std::vector<float> score_frames(std::span<const float> query_vec,
                                    unsigned n_threads = 1) const;

    /// Per-video max over that video's frame scores, in video order.
    std::vector<double> max_frame_aggregate(std::span<const float> frame_scores) const;

    /// MaxFrame video scores, canonicalized and truncated to top_n.
    RankedList search(std::span<const float> query_vec, const std::string& qid,
                      std::size_t top_n, const std::string& run_tag = "vision",
                      unsigned n_threads = 1) const;

    void save(const std::filesystem::path& dir) const;
    static DenseIndex load(const std::filesystem::path& dir);

    std::uint32_t dim() const { return dim_; }
    std::size_t n_videos() const { return doc_ids_.size(); }
    std::size_t n_frames() const { return dim_ == 0 ? 0 : matrix_.size() / dim_; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }

private:
    DenseIndex() = default;

    std::vector<float> matrix_;            // n_frames x dim, row-major
    std::vector<std::uint64_t> offsets_;   // video v owns rows [offsets_[v], offsets_[v+1])
    std::vector<std::string> doc_ids_;
    std::uint32_t dim_{0};
};

}  // namespace rankfuse::dense
