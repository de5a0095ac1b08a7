#include "rankfuse/lexical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "rankfuse/tokenizer.hpp"

namespace rankfuse::lexical {

namespace {

constexpr char kIndexMagic[] = "RFLEX001";

void append_part(std::string& out, const std::string& part) {
    if (part.empty()) return;
    if (!out.empty()) out.push_back(' ');
    out += part;
}

}  // namespace

std::string field_spec_name(FieldSpec f) {
    switch (f) {
        case FieldSpec::Ocr: return "ocr";
        case FieldSpec::Asr: return "asr";
        case FieldSpec::Joint: return "joint";
    }
    return "joint";
}

FieldSpec parse_field_spec(const std::string& name) {
    if (name == "ocr") return FieldSpec::Ocr;
    if (name == "asr") return FieldSpec::Asr;
    if (name == "joint") return FieldSpec::Joint;
    throw ValidationError("unknown field spec '" + name + "' (expected ocr, asr, or joint)");
}

std::string select_field(const VideoDocument& doc, FieldSpec field) {
    switch (field) {
        case FieldSpec::Ocr:
            return doc.ocr_text;
        case FieldSpec::Asr:
            return doc.asr_text;
        case FieldSpec::Joint: {
            std::string joint = doc.ocr_text;
            joint.push_back(' ');
            joint += doc.asr_text;
            if (doc.mt_ocr) append_part(joint, *doc.mt_ocr);
            if (doc.mt_asr) append_part(joint, *doc.mt_asr);
            return joint;
        }
    }
    return {};
}

LexicalIndex LexicalIndex::build(const std::vector<VideoDocument>& docs, FieldSpec field,
                                 double k1, double b,
                                 const std::function<void(std::size_t)>& progress) {
    if (docs.empty()) throw ValidationError("cannot build a lexical index over an empty collection");
    if (k1 < 0.0 || b < 0.0 || b > 1.0) {
        throw std::invalid_argument("BM25 parameters out of range (k1 >= 0, 0 <= b <= 1)");
    }

    LexicalIndex index;
    index.field_ = field;
    index.k1_ = k1;
    index.b_ = b;
    index.doc_ids_.reserve(docs.size());
    index.doc_lengths_.reserve(docs.size());

    std::unordered_set<std::string> seen;
    seen.reserve(docs.size());
    std::uint64_t total_len = 0;
    for (const auto& doc : docs) {
        if (doc.doc_id.empty()) throw ValidationError("empty doc_id in collection");
        if (!seen.insert(doc.doc_id).second) {
            throw ValidationError("duplicate doc_id '" + doc.doc_id + "' in collection");
        }
        const auto internal = static_cast<std::uint32_t>(index.doc_ids_.size());
        index.doc_ids_.push_back(doc.doc_id);

        auto terms = tokenize(select_field(doc, field));
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(terms.size()));
        total_len += terms.size();

        std::unordered_map<std::string, std::uint32_t> tf;
        for (auto& t : terms) ++tf[std::move(t)];
        for (const auto& [term, freq] : tf) {
            index.postings_[term].push_back(Posting{internal, freq});
        }
        if (progress && index.doc_ids_.size() % 1000 == 0) {
            progress(index.doc_ids_.size());
        }
    }
    for (auto& [term, plist] : index.postings_) {
        std::sort(plist.begin(), plist.end(),
                  [](const Posting& a, const Posting& b) { return a.doc < b.doc; });
    }
    index.avgdl_ = static_cast<double>(total_len) / static_cast<double>(docs.size());
    return index;
}

RankedList LexicalIndex::search(const QueryRecord& query, std::size_t top_n,
                                const std::string& run_tag) const {
    RankedList result;
    result.qid = query.qid;
    result.run_tag = run_tag;

    auto terms = tokenize(query.text);
    if (terms.empty() || top_n == 0) return result;

    const double n_docs = static_cast<double>(doc_ids_.size());
    std::unordered_map<std::uint32_t, double> scores;
    for (const auto& term : terms) {  // one contribution per occurrence
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const auto& plist = it->second;
        const double df = static_cast<double>(plist.size());
        const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
        for (const auto& p : plist) {
            const double tf = static_cast<double>(p.tf);
            const double dl = static_cast<double>(doc_lengths_[p.doc]);
            const double denom = tf + k1_ * (1.0 - b_ + b_ * dl / avgdl_);
            scores[p.doc] += idf * tf * (k1_ + 1.0) / denom;
        }
    }

    result.entries.reserve(scores.size());
    for (const auto& [doc, score] : scores) {
        if (score > 0.0) {
            result.entries.push_back(RankedEntry{doc_ids_[doc], 0, score});
        }
    }
    result = canonicalize(std::move(result));
    if (result.entries.size() > top_n) result.entries.resize(top_n);
    return result;
}

void LexicalIndex::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "index.bin", std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + (dir / "index.bin").string() + "' for writing");

    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    auto put_str = [&](const std::string& s) {
        put_u32(static_cast<std::uint32_t>(s.size()));
        out.write(s.data(), static_cast<std::streamsize>(s.size()));
    };

    out.write(kIndexMagic, 8);
    put_u32(static_cast<std::uint32_t>(field_));
    put_f64(k1_);
    put_f64(b_);
    put_f64(avgdl_);
    put_u64(doc_ids_.size());
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
        put_str(doc_ids_[i]);
        put_u32(doc_lengths_[i]);
    }
    put_u64(postings_.size());
    for (const auto& [term, plist] : postings_) {  // map order: deterministic
        put_str(term);
        put_u64(plist.size());
        for (const auto& p : plist) {
            put_u32(p.doc);
            put_u32(p.tf);
        }
    }
    if (!out) throw ValidationError("write failed for lexical index in '" + dir.string() + "'");
}

LexicalIndex LexicalIndex::load(const std::filesystem::path& dir) {
    std::ifstream in(dir / "index.bin", std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + (dir / "index.bin").string() + "' for reading");

    auto get_u32 = [&]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_u64 = [&]() {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    auto get_f64 = [&]() {
        double v = 0.0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    auto get_str = [&]() {
        std::string s(get_u32(), '\0');
        in.read(s.data(), static_cast<std::streamsize>(s.size()));
        return s;
    };

    char magic[8];
    in.read(magic, 8);
    if (!in || std::string_view(magic, 8) != kIndexMagic) {
        throw ValidationError("'" + dir.string() + "' is not a lexical index (bad magic)");
    }

    LexicalIndex index;
    index.field_ = static_cast<FieldSpec>(get_u32());
    index.k1_ = get_f64();
    index.b_ = get_f64();
    index.avgdl_ = get_f64();
    const auto n_docs = get_u64();
    index.doc_ids_.reserve(n_docs);
    index.doc_lengths_.reserve(n_docs);
    for (std::uint64_t i = 0; i < n_docs; ++i) {
        index.doc_ids_.push_back(get_str());
        index.doc_lengths_.push_back(get_u32());
    }
    const auto n_terms = get_u64();
    for (std::uint64_t t = 0; t < n_terms; ++t) {
        auto term = get_str();
        auto& plist = index.postings_[std::move(term)];
        plist.resize(get_u64());
        for (auto& p : plist) {
            p.doc = get_u32();
            p.tf = get_u32();
        }
    }
    if (!in) throw ValidationError("truncated lexical index in '" + dir.string() + "'");
    return index;
}

}  // namespace rankfuse::lexical
