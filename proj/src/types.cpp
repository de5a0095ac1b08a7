#include "rankfuse/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace rankfuse {

RankedList canonicalize(RankedList list) {
    for (const auto& e : list.entries) {
        if (!std::isfinite(e.score)) {
            throw ValidationError("non-finite score for doc_id '" + e.doc_id +
                                  "' in ranked list for query '" + list.qid + "'");
        }
    }
    std::sort(list.entries.begin(), list.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.doc_id < b.doc_id;
              });
    std::unordered_set<std::string> seen;
    seen.reserve(list.entries.size());
    std::uint32_t rank = 1;
    for (auto& e : list.entries) {
        if (!seen.insert(e.doc_id).second) {
            throw ValidationError("duplicate doc_id '" + e.doc_id +
                                  "' in ranked list for query '" + list.qid + "'");
        }
        e.rank = rank++;
    }
    return list;
}

}  // namespace rankfuse
