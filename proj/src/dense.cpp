#include "rankfuse/dense.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_set>

#include "rankfuse/io.hpp"
#include "rankfuse/simd_dot.hpp"

namespace rankfuse::dense {

DenseIndex DenseIndex::build(const std::vector<FrameEmbeddings>& videos) {
    if (videos.empty()) throw ValidationError("cannot build a dense index over an empty store");

    DenseIndex index;
    index.dim_ = videos.front().dim;
    if (index.dim_ == 0) throw ValidationError("embedding dim must be positive");

    std::unordered_set<std::string> seen;
    seen.reserve(videos.size());
    std::size_t total_rows = 0;
    for (const auto& v : videos) {
        if (v.dim != index.dim_) {
            throw ValidationError("dim mismatch for '" + v.doc_id + "': " + std::to_string(v.dim) +
                                  " vs " + std::to_string(index.dim_));
        }
        if (v.n_frames() == 0) throw ValidationError("'" + v.doc_id + "' has zero frames");
        if (!seen.insert(v.doc_id).second) {
            throw ValidationError("duplicate doc_id '" + v.doc_id + "' in store");
        }
        total_rows += v.n_frames();
    }

    index.matrix_.reserve(total_rows * index.dim_);
    index.offsets_.reserve(videos.size() + 1);
    index.doc_ids_.reserve(videos.size());
    index.offsets_.push_back(0);
    for (const auto& v : videos) {
        index.doc_ids_.push_back(v.doc_id);
        index.matrix_.insert(index.matrix_.end(), v.vectors.begin(), v.vectors.end());
        index.offsets_.push_back(index.matrix_.size() / index.dim_);
    }
    return index;
}

std::vector<float> DenseIndex::score_frames(std::span<const float> query_vec,
                                            unsigned n_threads) const {
    if (query_vec.size() != dim_) {
        throw std::invalid_argument("query dim " + std::to_string(query_vec.size()) +
                                    " does not match index dim " + std::to_string(dim_));
    }
    double norm_sq = 0.0;
    for (float v : query_vec) {
        if (!std::isfinite(v)) throw ValidationError("non-finite value in query vector");
        norm_sq += static_cast<double>(v) * v;
    }
    if (norm_sq == 0.0) throw ValidationError("zero-norm query vector");

    std::vector<float> query(query_vec.begin(), query_vec.end());
    const double norm = std::sqrt(norm_sq);
    if (std::abs(norm - 1.0) > 1e-6) {
        const float inv = static_cast<float>(1.0 / norm);
        for (auto& v : query) v *= inv;
    }

    const std::size_t rows = n_frames();
    std::vector<float> scores(rows);
    if (n_threads <= 1 || rows < 4096) {
        simd::matvec(matrix_.data(), rows, dim_, query.data(), scores.data());
        return scores;
    }

    // Each row's dot is computed identically regardless of which thread owns
    // it, so the result does not depend on the partitioning.
    const unsigned workers = std::min<unsigned>(n_threads, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    const std::size_t chunk = (rows + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(rows, w * chunk);
        const std::size_t end = std::min(rows, begin + chunk);
        if (begin == end) break;
        pool.emplace_back([&, begin, end] {
            simd::matvec(matrix_.data() + begin * dim_, end - begin, dim_, query.data(),
                         scores.data() + begin);
        });
    }
    for (auto& t : pool) t.join();
    return scores;
}

std::vector<double> DenseIndex::max_frame_aggregate(std::span<const float> frame_scores) const {
    if (frame_scores.size() != n_frames()) {
        throw std::invalid_argument("frame score count does not match index");
    }
    std::vector<double> video_scores(doc_ids_.size());
    for (std::size_t v = 0; v < doc_ids_.size(); ++v) {
        double best = -2.0;  // below any cosine
        for (std::uint64_t r = offsets_[v]; r < offsets_[v + 1]; ++r) {
            best = std::max(best, static_cast<double>(frame_scores[r]));
        }
        video_scores[v] = best;
    }
    return video_scores;
}

RankedList DenseIndex::search(std::span<const float> query_vec, const std::string& qid,
                              std::size_t top_n, const std::string& run_tag,
                              unsigned n_threads) const {
    const auto frame_scores = score_frames(query_vec, n_threads);
    const auto video_scores = max_frame_aggregate(frame_scores);

    RankedList result;
    result.qid = qid;
    result.run_tag = run_tag;
    result.entries.reserve(doc_ids_.size());
    for (std::size_t v = 0; v < doc_ids_.size(); ++v) {
        result.entries.push_back(RankedEntry{doc_ids_[v], 0, video_scores[v]});
    }
    result = canonicalize(std::move(result));
    if (result.entries.size() > top_n) result.entries.resize(top_n);
    return result;
}

void DenseIndex::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    io::EmbeddingStoreManifest manifest;
    manifest.dim = dim_;
    manifest.normalized = true;
    manifest.source_note = "dense index";
    std::vector<FrameEmbeddings> videos;
    videos.reserve(doc_ids_.size());
    for (std::size_t v = 0; v < doc_ids_.size(); ++v) {
        FrameEmbeddings fe;
        fe.doc_id = doc_ids_[v];
        fe.dim = dim_;
        fe.vectors.assign(matrix_.begin() + static_cast<std::ptrdiff_t>(offsets_[v] * dim_),
                          matrix_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1] * dim_));
        manifest.entries.emplace_back(fe.doc_id, static_cast<std::uint32_t>(fe.n_frames()));
        videos.push_back(std::move(fe));
    }
    io::write_embeddings(manifest, videos, dir / "embeddings.json", dir / "embeddings.f32");
}

DenseIndex DenseIndex::load(const std::filesystem::path& dir) {
    return build(io::read_embeddings(dir / "embeddings.json", dir / "embeddings.f32"));
}

}  // namespace rankfuse::dense
