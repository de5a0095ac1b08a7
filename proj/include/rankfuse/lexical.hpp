#pragma once

/** \file lexical.hpp
 *  \brief BM25 retrieval over extracted OCR/ASR text, including the joint
 *  OCR+ASR field.
 *
 * The joint field concatenates ocr_text, a single space, asr_text, then any
 * pre-supplied translations; the single fields index their raw text only.
 * Defaults k1=0.9, b=0.4. idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)), which
 * stays non-negative on small corpora.
 */

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rankfuse/types.hpp"

namespace rankfuse::lexical {

enum class FieldSpec { Ocr, Asr, Joint };

std::string field_spec_name(FieldSpec f);
FieldSpec parse_field_spec(const std::string& name);

/// The text a given field spec selects from a document.
std::string select_field(const VideoDocument& doc, FieldSpec field);

struct Posting {
    std::uint32_t doc{0};  // internal id
    std::uint32_t tf{0};
};

/** \brief Immutable inverted index over one field of a document collection.
 *  Construction is single-writer; a built index serves concurrent searches. */
class LexicalIndex {
public:
    /// Tokenize and index the selected field of every document.
    /// Documents whose field is empty get length 0 and are never returned.
    /// progress, when set, is called after every 1000 documents.
    static LexicalIndex build(const std::vector<VideoDocument>& docs, FieldSpec field,
                              double k1 = 0.9, double b = 0.4,
                              const std::function<void(std::size_t)>& progress = {});

    /// BM25 over the query's tokens. Duplicate query terms contribute once
    /// per occurrence. Only documents with score > 0 are returned,
    /// canonicalized and truncated to top_n. An empty query yields an empty
    /// list.
    RankedList search(const QueryRecord& query, std::size_t top_n,
                      const std::string& run_tag = "text") const;

    void save(const std::filesystem::path& dir) const;
    static LexicalIndex load(const std::filesystem::path& dir);

    std::size_t doc_count() const { return doc_ids_.size(); }
    double avgdl() const { return avgdl_; }
    FieldSpec field() const { return field_; }
    double k1() const { return k1_; }
    double b() const { return b_; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    const std::vector<std::uint32_t>& doc_lengths() const { return doc_lengths_; }

private:
    LexicalIndex() = default;

    std::map<std::string, std::vector<Posting>> postings_;  // ordered for determinism
    std::vector<std::string> doc_ids_;                      // internal id -> external
    std::vector<std::uint32_t> doc_lengths_;
    double avgdl_{0.0};
    FieldSpec field_{FieldSpec::Joint};
    double k1_{0.9};
    double b_{0.4};
};

}  // namespace rankfuse::lexical
