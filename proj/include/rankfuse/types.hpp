#pragma once

/** \file types.hpp
 *  \brief Core domain types shared by every module: ranked lists, documents,
 *  frame embeddings, fusion weights, and relevance judgments.
 *
 * All types are plain immutable-by-convention values; none of them perform
 * I/O. Construction helpers validate the invariants they can check locally.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankfuse {

/** \brief Data/validation failure carrying a human-readable context string.
 *
 * Readers and validators throw this instead of silently repairing input.
 * The CLI maps it to exit code 2.
 */
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/** \brief One retrieval query: identifier plus query words. */
struct QueryRecord {
    std::string qid;
    std::string text;
};

/** \brief One entry of a ranked list. Ranks are 1-based everywhere. */
struct RankedEntry {
    std::string doc_id;
    std::uint32_t rank{0};
    double score{0.0};
};

/** \brief One query's ordered retrieval result.
 *
 * After canonicalize(): ranks are exactly 1..n, doc_ids unique, scores
 * non-increasing with rank, ties broken by ascending doc_id byte order.
 */
struct RankedList {
    std::string qid;
    std::string run_tag;
    std::vector<RankedEntry> entries;
};

/** \brief Extracted OCR/ASR text for one video, plus optional pre-supplied
 *  machine translations. The texts' production is upstream of this artifact. */
struct VideoDocument {
    std::string doc_id;
    std::string ocr_text;
    std::string asr_text;
    std::optional<std::string> mt_ocr;
    std::optional<std::string> mt_asr;
};

/** \brief Per-video matrix of frame vectors, row-major, unit-normalized. */
struct FrameEmbeddings {
    std::string doc_id;
    std::uint32_t dim{0};
    std::vector<float> vectors;  // n_frames x dim

    std::size_t n_frames() const { return dim == 0 ? 0 : vectors.size() / dim; }
    const float* frame(std::size_t i) const { return vectors.data() + i * dim; }
};

/** \brief Per-video fusion coefficient alpha in [0,1]; alpha weights the
 *  text-modality term. Videos absent from the mapping use default_alpha.
 *  probe_note records the calibration probe text for provenance. */
struct WeightTable {
    std::map<std::string, double> alphas;
    double default_alpha{0.5};
    std::string probe_note;

    double alpha_for(const std::string& doc_id) const {
        auto it = alphas.find(doc_id);
        return it == alphas.end() ? default_alpha : it->second;
    }
};

enum class FusionMethod { RRF, WRRF };

/** \brief Fusion configuration: smoothing k, per-list depth, output size. */
struct FusionParams {
    FusionMethod method{FusionMethod::WRRF};
    double k{0.0};
    std::size_t depth{1000};
    std::size_t output_size{1000};
};

/** \brief Graded relevance judgments: (qid, doc_id) -> grade >= 0. */
struct Qrels {
    std::map<std::string, std::map<std::string, int>> grades;  // qid -> doc_id -> grade

    int grade(const std::string& qid, const std::string& doc_id) const {
        auto q = grades.find(qid);
        if (q == grades.end()) return 0;
        auto d = q->second.find(doc_id);
        return d == q->second.end() ? 0 : d->second;
    }
    bool has_query(const std::string& qid) const { return grades.count(qid) != 0; }
};

/** \brief Per-metric evaluation output: per-query values and their mean.
 *
 * Queries with no judged-relevant documents are excluded from the mean and
 * counted in skipped_no_relevant; run queries without judgments are counted
 * in skipped_unjudged.
 */
struct EvalReport {
    std::string metric_name;
    std::map<std::string, double> per_query;
    double mean{0.0};
    std::size_t skipped_unjudged{0};
    std::size_t skipped_no_relevant{0};
};

/** \brief Sort entries by score descending (doc_id ascending on ties) and
 *  rewrite ranks to 1..n.
 *
 * Idempotent and invariant to the input entry order. Non-finite scores and
 * duplicate doc_ids are rejected.
 */
RankedList canonicalize(RankedList list);

}  // namespace rankfuse
