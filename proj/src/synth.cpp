#include "rankfuse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rankfuse::synth {

namespace {

// Distribution helpers on top of mt19937_64: the standard distributions are
// implementation-defined, and generated fixtures must be stable across
// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }

    // Box-Muller, one value per call.
    double normal() {
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

std::string padded_id(const char* prefix, std::size_t i, int width) {
    std::string digits = std::to_string(i);
    std::string out = prefix;
    for (int p = static_cast<int>(digits.size()); p < width; ++p) out.push_back('0');
    return out + digits;
}

std::vector<float> random_unit_vector(Rng& rng, std::uint32_t dim) {
    std::vector<float> v(dim);
    double norm_sq = 0.0;
    for (auto& x : v) {
        x = static_cast<float>(rng.normal());
        norm_sq += static_cast<double>(x) * x;
    }
    const float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
    for (auto& x : v) x *= inv;
    return v;
}

// normalize(c * target + sqrt(1 - c^2) * g) for unit g orthogonalized
// against target: the cosine with target comes out close to c.
std::vector<float> mixed_vector(Rng& rng, const std::vector<float>& target, double c) {
    auto g = random_unit_vector(rng, static_cast<std::uint32_t>(target.size()));
    double dot = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) dot += static_cast<double>(g[i]) * target[i];
    double res_sq = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] -= static_cast<float>(dot * target[i]);
        res_sq += static_cast<double>(g[i]) * g[i];
    }
    const double s = std::sqrt(std::max(1.0 - c * c, 0.0) / std::max(res_sq, 1e-30));
    std::vector<float> v(target.size());
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = static_cast<float>(c * target[i] + s * g[i]);
        norm_sq += static_cast<double>(v[i]) * v[i];
    }
    const float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
    for (auto& x : v) x *= inv;
    return v;
}

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

}  // namespace

Collection generate(const GenerateParams& params) {
    if (params.n_videos == 0 || params.n_queries == 0 || params.dim == 0) {
        throw ValidationError("n_videos, n_queries, and dim must be positive");
    }
    if (params.n_queries > params.n_videos) {
        throw ValidationError("need n_videos >= n_queries (one relevant video per query)");
    }
    if (!(params.text_reliable_fraction >= 0.0 && params.text_reliable_fraction <= 1.0)) {
        throw ValidationError("text_reliable_fraction must lie in [0,1]");
    }
    if (!(params.noise >= 0.0 && params.noise <= 1.0)) {
        throw ValidationError("noise must lie in [0,1]");
    }

    Rng rng(params.seed);
    const std::size_t n = params.n_videos;
    const std::size_t q = params.n_queries;

    Collection col;
    col.probe.doc_id = "probe";
    col.probe.dim = params.dim;
    col.probe.vectors = random_unit_vector(rng, params.dim);
    const std::vector<float> probe_vec = col.probe.vectors;

    // Reliability split: exact count, seed-shuffled assignment.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(i)]);
    }
    const auto n_text = static_cast<std::size_t>(
        std::llround(params.text_reliable_fraction * static_cast<double>(n)));
    col.text_reliable.assign(n, false);
    for (std::size_t i = 0; i < n_text; ++i) col.text_reliable[order[i]] = true;

    std::vector<std::size_t> text_pool, vision_pool;
    for (std::size_t v = 0; v < n; ++v) {
        (col.text_reliable[v] ? text_pool : vision_pool).push_back(v);
    }

    // Queries: vector plus a three-word phrase.
    std::vector<std::vector<float>> query_vecs(q);
    std::vector<std::vector<std::string>> query_words(q);
    for (std::size_t i = 0; i < q; ++i) {
        query_vecs[i] = random_unit_vector(rng, params.dim);
        const std::string base = "sig" + std::to_string(i);
        query_words[i] = {base + "a", base + "b", base + "c"};
        col.queries.push_back(QueryRecord{padded_id("q", i, 4), join_words(query_words[i])});

        FrameEmbeddings qe;
        qe.doc_id = col.queries.back().qid;
        qe.dim = params.dim;
        qe.vectors = query_vecs[i];
        col.query_vectors.push_back(std::move(qe));
    }

    // Per-video text and frames.
    constexpr std::size_t kFillerVocab = 500;
    std::vector<std::vector<std::string>> ocr_words(n), asr_words(n);
    std::vector<std::vector<std::vector<float>>> frames(n);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t ocr_len = 6 + rng.index(6);
        const std::size_t asr_len = 6 + rng.index(6);
        for (std::size_t w = 0; w < ocr_len; ++w) {
            ocr_words[v].push_back("filler" + std::to_string(rng.index(kFillerVocab)));
        }
        for (std::size_t w = 0; w < asr_len; ++w) {
            asr_words[v].push_back("filler" + std::to_string(rng.index(kFillerVocab)));
        }
        const std::size_t n_frames = 4 + rng.index(5);
        for (std::size_t f = 0; f < n_frames; ++f) {
            frames[v].push_back(random_unit_vector(rng, params.dim));
        }
        if (col.text_reliable[v]) {
            // News-like: one frame aligned with the probe.
            const double c_probe = 0.9 - 0.3 * params.noise;
            frames[v][0] = mixed_vector(rng, probe_vec, c_probe);
        }
    }

    // Relevance signal: query i's relevant video is video i.
    for (std::size_t i = 0; i < q; ++i) {
        const std::size_t v = i;
        col.qrels.grades[col.queries[i].qid][padded_id("v", v, 5)] = 1;
        if (col.text_reliable[v]) {
            for (const auto& word : query_words[i]) {
                if (rng.uniform01() < 0.5 * params.noise) continue;  // dropped by noise
                ocr_words[v].push_back(word);
                asr_words[v].push_back(word);
            }
        } else {
            const double c = 1.0 - params.noise;
            frames[v].back() = (params.noise == 0.0) ? query_vecs[i]
                                                     : mixed_vector(rng, query_vecs[i], c);
        }
    }

    // Cross-modality leaks, the confusions WRRF is built to suppress:
    // query words leak into vision-reliable distractors, query-like frames
    // into text-reliable distractors.
    const auto n_leaks = static_cast<std::size_t>(std::floor(params.noise * 8.0));
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t l = 0; l < n_leaks && !vision_pool.empty(); ++l) {
            const std::size_t v = vision_pool[rng.index(vision_pool.size())];
            if (v == i) continue;
            if (rng.uniform01() < params.noise) {
                for (const auto& word : query_words[i]) ocr_words[v].push_back(word);
            } else {
                ocr_words[v].push_back(query_words[i][rng.index(3)]);
            }
        }
        for (std::size_t l = 0; l < n_leaks && !text_pool.empty(); ++l) {
            const std::size_t v = text_pool[rng.index(text_pool.size())];
            if (v == i) continue;
            const double c = rng.uniform(0.35, 0.95);
            frames[v].push_back(mixed_vector(rng, query_vecs[i], c));
        }
    }

    // Materialize documents, frame store, oracle weights.
    col.oracle_weights.default_alpha = 0.5;
    col.oracle_weights.probe_note = "synthetic oracle";
    for (std::size_t v = 0; v < n; ++v) {
        const std::string doc_id = padded_id("v", v, 5);
        col.documents.push_back(
            VideoDocument{doc_id, join_words(ocr_words[v]), join_words(asr_words[v]), {}, {}});

        FrameEmbeddings fe;
        fe.doc_id = doc_id;
        fe.dim = params.dim;
        fe.vectors.reserve(frames[v].size() * params.dim);
        for (const auto& frame : frames[v]) {
            fe.vectors.insert(fe.vectors.end(), frame.begin(), frame.end());
        }
        col.videos.push_back(std::move(fe));

        col.oracle_weights.alphas[doc_id] = col.text_reliable[v] ? 0.9 : 0.1;
    }
    return col;
}

void write_collection(const Collection& collection, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    io::write_documents(collection.documents, dir / "documents.jsonl");
    io::write_queries(collection.queries, dir / "queries.tsv");
    io::write_qrels(collection.qrels, dir / "qrels.txt");
    io::write_weights(collection.oracle_weights, dir / "oracle_weights.tsv");

    auto make_manifest = [](const std::vector<FrameEmbeddings>& videos, const char* note) {
        io::EmbeddingStoreManifest m;
        m.dim = videos.front().dim;
        m.normalized = true;
        m.source_note = note;
        for (const auto& v : videos) {
            m.entries.emplace_back(v.doc_id, static_cast<std::uint32_t>(v.n_frames()));
        }
        return m;
    };

    io::write_embeddings(make_manifest(collection.videos, "synthetic frame store"),
                         collection.videos, dir / "embeddings.json", dir / "embeddings.f32");
    io::write_embeddings(make_manifest(collection.query_vectors, "synthetic query store"),
                         collection.query_vectors, dir / "queries.json", dir / "queries.f32");
    io::write_embeddings(make_manifest({collection.probe}, "synthetic probe store"),
                         {collection.probe}, dir / "probe.json", dir / "probe.f32");
}

}  // namespace rankfuse::synth
