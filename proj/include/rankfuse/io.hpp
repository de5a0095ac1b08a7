#pragma once

/** \file io.hpp
 *  \brief Readers and writers for every on-disk format: TREC runs and qrels,
 *  query TSVs, document JSONL, the embedding store, and weight tables.
 *
 * Readers reject malformed input instead of repairing it; every parse error
 * names the offending line or byte offset. Text files must be valid UTF-8.
 * Writers are deterministic: write -> read -> write is byte-stable.
 */

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rankfuse/types.hpp"

namespace rankfuse::io {

/** \brief Sidecar manifest describing a raw float32 vector payload. */
struct EmbeddingStoreManifest {
    std::uint32_t dim{0};
    bool normalized{false};
    std::vector<std::pair<std::string, std::uint32_t>> entries;  // (doc_id, n_frames)
    std::string source_note;
};

/// True iff the byte string is well-formed UTF-8.
bool valid_utf8(std::string_view bytes);

// --- TREC run files: qid Q0 doc_id rank score run_tag ---

/// Parse a six-column run file into canonicalized per-query lists
/// (qid order of first appearance).
std::vector<RankedList> read_run(const std::filesystem::path& path);

/// Write lists in the six-column format, scores at 6 decimal places.
/// Entries are re-ranked on their printed score so the file round-trips
/// byte-identically through read_run.
void write_run(const std::vector<RankedList>& lists, const std::filesystem::path& path);

// --- TREC qrels: qid 0 doc_id grade ---

Qrels read_qrels(const std::filesystem::path& path);
void write_qrels(const Qrels& qrels, const std::filesystem::path& path);

// --- queries: qid TAB text ---

std::vector<QueryRecord> read_queries(const std::filesystem::path& path);
void write_queries(const std::vector<QueryRecord>& queries, const std::filesystem::path& path);

// --- documents: one JSON object per line ---

std::vector<VideoDocument> read_documents(const std::filesystem::path& path);
void write_documents(const std::vector<VideoDocument>& docs, const std::filesystem::path& path);

// --- embedding store: JSON manifest + raw little-endian float32 payload ---

EmbeddingStoreManifest read_manifest(const std::filesystem::path& manifest_path);

/// Load per-video frame matrices. Rows are L2-normalized on ingest when the
/// manifest says normalized=false; a zero-norm row is an error. When the
/// manifest claims normalized=true, row norms must already be within 1e-3
/// of 1.
std::vector<FrameEmbeddings> read_embeddings(const std::filesystem::path& manifest_path,
                                             const std::filesystem::path& vectors_path);

void write_embeddings(const EmbeddingStoreManifest& manifest,
                      const std::vector<FrameEmbeddings>& videos,
                      const std::filesystem::path& manifest_path,
                      const std::filesystem::path& vectors_path);

// --- weight tables: "#default_alpha=<v>" header, then doc_id TAB alpha ---

WeightTable read_weights(const std::filesystem::path& path);

/// A non-empty probe_note is recorded as a "#probe=<text>" header line.
void write_weights(const WeightTable& table, const std::filesystem::path& path);

}  // namespace rankfuse::io
