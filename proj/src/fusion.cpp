#include "rankfuse/fusion.hpp"

#include <stdexcept>
#include <unordered_map>

namespace rankfuse::fusion {

namespace {

void check_k(double k) {
    if (!(k >= 0.0)) throw std::invalid_argument("fusion smoothing k must be >= 0");
}

void check_same_qid(const RankedList& a, const RankedList& b) {
    if (a.qid != b.qid) {
        throw ValidationError("cannot fuse lists with mixed qids ('" + a.qid + "' vs '" +
                              b.qid + "')");
    }
}

}  // namespace

RankedList rrf_fuse(const std::vector<RankedList>& lists, double k,
                    std::size_t output_size, std::size_t depth,
                    const std::string& run_tag) {
    check_k(k);
    if (lists.size() < 2) throw std::invalid_argument("rrf_fuse needs at least two lists");
    for (const auto& l : lists) check_same_qid(lists.front(), l);

    // canonicalize() imposes a strict total order afterwards, so the
    // accumulation container's iteration order cannot leak into the output.
    std::unordered_map<std::string, double> scores;
    for (const auto& list : lists) {
        const std::size_t n = std::min<std::size_t>(depth, list.entries.size());
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = list.entries[i];
            scores[e.doc_id] += 1.0 / (static_cast<double>(e.rank) + k);
        }
    }

    RankedList fused;
    fused.qid = lists.front().qid;
    fused.run_tag = run_tag;
    fused.entries.reserve(scores.size());
    for (const auto& [doc_id, score] : scores) {
        fused.entries.push_back(RankedEntry{doc_id, 0, score});
    }
    fused = canonicalize(std::move(fused));
    if (fused.entries.size() > output_size) fused.entries.resize(output_size);
    return fused;
}

RankedList wrrf_fuse(const RankedList& text, const RankedList& vision,
                     const WeightTable& weights, double k, std::size_t output_size,
                     std::size_t depth, const std::string& run_tag) {
    check_k(k);
    check_same_qid(text, vision);

    // doc -> (reciprocal text term, reciprocal vision term); each term is
    // weighted only at the end so alpha lookup happens once per doc.
    std::unordered_map<std::string, std::pair<double, double>> recip;
    const std::size_t nt = std::min<std::size_t>(depth, text.entries.size());
    for (std::size_t i = 0; i < nt; ++i) {
        const auto& e = text.entries[i];
        recip[e.doc_id].first = 1.0 / (static_cast<double>(e.rank) + k);
    }
    const std::size_t nv = std::min<std::size_t>(depth, vision.entries.size());
    for (std::size_t i = 0; i < nv; ++i) {
        const auto& e = vision.entries[i];
        recip[e.doc_id].second = 1.0 / (static_cast<double>(e.rank) + k);
    }

    RankedList fused;
    fused.qid = text.qid;
    fused.run_tag = run_tag;
    fused.entries.reserve(recip.size());
    for (const auto& [doc_id, terms] : recip) {
        const double alpha = weights.alpha_for(doc_id);
        if (!(alpha >= 0.0 && alpha <= 1.0)) {
            throw ValidationError("alpha for '" + doc_id + "' outside [0,1]");
        }
        const double score = alpha * terms.first + (1.0 - alpha) * terms.second;
        fused.entries.push_back(RankedEntry{doc_id, 0, score});
    }
    fused = canonicalize(std::move(fused));
    if (fused.entries.size() > output_size) fused.entries.resize(output_size);
    return fused;
}

}  // namespace rankfuse::fusion
