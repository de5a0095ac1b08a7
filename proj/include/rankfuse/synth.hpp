#pragma once

/** \file synth.hpp
 *  \brief Seeded synthetic benchmark generator with controllable per-video
 *  modality reliability.
 *
 * Each query has exactly one relevant video. A text-reliable video carries
 * the query words in its OCR/ASR text and random frames; a vision-reliable
 * video carries a frame near the query vector and filler text. Text-reliable
 * videos also carry a frame aligned with the calibration probe vector, so
 * probe calibration recovers the reliability split. The noise parameter
 * degrades the reliable signal and leaks cross-modality confusions: query
 * words into vision-reliable distractors, query-like frames into
 * text-reliable distractors. Generation is single-threaded and fully
 * deterministic for a given seed.
 */

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rankfuse/io.hpp"
#include "rankfuse/types.hpp"

namespace rankfuse::synth {

struct GenerateParams {
    std::uint64_t seed{42};
    std::size_t n_videos{1000};
    std::size_t n_queries{100};
    std::uint32_t dim{64};
    double text_reliable_fraction{0.5};
    double noise{0.3};
};

struct Collection {
    std::vector<VideoDocument> documents;
    std::vector<FrameEmbeddings> videos;        // frame store (normalized)
    std::vector<QueryRecord> queries;
    std::vector<FrameEmbeddings> query_vectors; // one 1-frame entry per query
    FrameEmbeddings probe;                      // calibration probe, 1 frame
    Qrels qrels;
    WeightTable oracle_weights;                 // 0.9 text-reliable, 0.1 vision-reliable
    std::vector<bool> text_reliable;            // per video index
};

Collection generate(const GenerateParams& params);

/// Write every artifact in the io module's formats:
/// documents.jsonl, embeddings.json/.f32, queries.tsv, query store
/// queries.json/.f32, probe.json/.f32, qrels.txt, oracle_weights.tsv.
void write_collection(const Collection& collection, const std::filesystem::path& dir);

}  // namespace rankfuse::synth
