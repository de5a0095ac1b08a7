#include "rankfuse/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace rankfuse::io {

namespace {

using nlohmann::json;

std::ifstream open_for_read(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw ValidationError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    return out;
}

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line_no,
                            const std::string& why) {
    throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + why);
}

void require_utf8(const std::filesystem::path& path, std::size_t line_no, const std::string& line) {
    if (!valid_utf8(line)) fail_line(path, line_no, "invalid UTF-8");
}

// Strips one trailing '\r' so CRLF files parse; embedded bare '\r' stays.
bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> cols;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) cols.push_back(tok);
    return cols;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_u32(const std::string& s, std::uint32_t& out) {
    if (s.empty() || s[0] == '-' || s[0] == '+') return false;
    try {
        std::size_t pos = 0;
        unsigned long v = std::stoul(s, &pos);
        if (pos != s.size() || v > 0xFFFFFFFFul) return false;
        out = static_cast<std::uint32_t>(v);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

std::string format_score(double score) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", score);
    return buf;
}

// The double a reader will reconstruct from the printed 6-decimal score.
double printed_score_value(double score) {
    return std::stod(format_score(score));
}

}  // namespace

bool valid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    const auto n = bytes.size();
    while (i < n) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        std::size_t len;
        std::uint32_t cp;
        if (b0 < 0x80) {
            ++i;
            continue;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (std::size_t j = 1; j < len; ++j) {
            const auto bj = static_cast<unsigned char>(bytes[i + j]);
            if ((bj & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (bj & 0x3F);
        }
        // overlong, surrogate, and out-of-range forms are invalid
        if (len == 2 && cp < 0x80) return false;
        if (len == 3 && cp < 0x800) return false;
        if (len == 4 && cp < 0x10000) return false;
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += len;
    }
    return true;
}

std::vector<RankedList> read_run(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::vector<RankedList> lists;
    std::unordered_map<std::string, std::size_t> index_of;  // qid -> position
    std::unordered_set<std::string> seen_pairs;

    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        require_utf8(path, line_no, line);
        auto cols = split_ws(line);
        if (cols.size() != 6) {
            fail_line(path, line_no,
                      "expected 6 columns (qid Q0 doc_id rank score tag), got " +
                          std::to_string(cols.size()));
        }
        const std::string& qid = cols[0];
        const std::string& doc_id = cols[2];
        std::uint32_t rank = 0;
        if (!parse_u32(cols[3], rank) || rank == 0) {
            fail_line(path, line_no, "unparsable rank '" + cols[3] + "'");
        }
        double score = 0.0;
        if (!parse_double(cols[4], score)) {
            fail_line(path, line_no, "unparsable score '" + cols[4] + "'");
        }
        if (!seen_pairs.insert(qid + '\x1f' + doc_id).second) {
            fail_line(path, line_no, "duplicate (qid, doc_id) pair (" + qid + ", " + doc_id + ")");
        }
        auto [it, fresh] = index_of.try_emplace(qid, lists.size());
        if (fresh) {
            lists.push_back(RankedList{qid, cols[5], {}});
        }
        lists[it->second].entries.push_back(RankedEntry{doc_id, rank, score});
    }
    for (auto& l : lists) {
        try {
            l = canonicalize(std::move(l));
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + ": " + e.what());
        }
    }
    return lists;
}

void write_run(const std::vector<RankedList>& lists, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (const auto& list : lists) {
        // Re-rank on the printed (6-decimal) score so the serialized order is
        // exactly what a reader reconstructs; otherwise sub-precision ties
        // would reorder on the next round trip.
        std::vector<std::pair<double, const RankedEntry*>> rounded;
        rounded.reserve(list.entries.size());
        for (const auto& e : list.entries) {
            if (!std::isfinite(e.score)) {
                throw ValidationError("non-finite score for doc_id '" + e.doc_id +
                                      "' in run for query '" + list.qid + "'");
            }
            rounded.emplace_back(printed_score_value(e.score), &e);
        }
        std::stable_sort(rounded.begin(), rounded.end(),
                         [](const auto& a, const auto& b) {
                             if (a.first != b.first) return a.first > b.first;
                             return a.second->doc_id < b.second->doc_id;
                         });
        std::uint32_t rank = 1;
        for (const auto& [score, entry] : rounded) {
            out << list.qid << ' ' << "Q0" << ' ' << entry->doc_id << ' ' << rank++ << ' '
                << format_score(score) << ' ' << list.run_tag << '\n';
        }
    }
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

Qrels read_qrels(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        require_utf8(path, line_no, line);
        auto cols = split_ws(line);
        if (cols.size() != 4) {
            fail_line(path, line_no, "expected 4 columns (qid 0 doc_id grade), got " +
                                         std::to_string(cols.size()));
        }
        int grade = 0;
        try {
            std::size_t pos = 0;
            grade = std::stoi(cols[3], &pos);
            if (pos != cols[3].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            fail_line(path, line_no, "unparsable grade '" + cols[3] + "'");
        }
        if (grade < 0) fail_line(path, line_no, "negative grade " + std::to_string(grade));
        auto& per_query = qrels.grades[cols[0]];
        if (!per_query.emplace(cols[2], grade).second) {
            fail_line(path, line_no,
                      "duplicate judgment for (" + cols[0] + ", " + cols[2] + ")");
        }
    }
    return qrels;
}

void write_qrels(const Qrels& qrels, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (const auto& [qid, docs] : qrels.grades) {
        for (const auto& [doc_id, grade] : docs) {
            out << qid << " 0 " << doc_id << ' ' << grade << '\n';
        }
    }
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

std::vector<QueryRecord> read_queries(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::vector<QueryRecord> queries;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        require_utf8(path, line_no, line);
        auto tab = line.find('\t');
        if (tab == std::string::npos) fail_line(path, line_no, "expected qid TAB text");
        std::string qid = line.substr(0, tab);
        std::string text = line.substr(tab + 1);
        if (qid.empty()) fail_line(path, line_no, "empty qid");
        if (text.empty()) fail_line(path, line_no, "empty query text");
        if (!seen.insert(qid).second) fail_line(path, line_no, "duplicate qid '" + qid + "'");
        queries.push_back(QueryRecord{std::move(qid), std::move(text)});
    }
    return queries;
}

void write_queries(const std::vector<QueryRecord>& queries, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (const auto& q : queries) {
        out << q.qid << '\t' << q.text << '\n';
    }
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

std::vector<VideoDocument> read_documents(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::vector<VideoDocument> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            fail_line(path, line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!obj.is_object()) fail_line(path, line_no, "expected a JSON object");
        VideoDocument doc;
        try {
            doc.doc_id = obj.at("doc_id").get<std::string>();
            doc.ocr_text = obj.value("ocr", std::string{});
            doc.asr_text = obj.value("asr", std::string{});
            if (obj.contains("mt_ocr")) doc.mt_ocr = obj.at("mt_ocr").get<std::string>();
            if (obj.contains("mt_asr")) doc.mt_asr = obj.at("mt_asr").get<std::string>();
        } catch (const json::exception& e) {
            fail_line(path, line_no, std::string("bad document fields: ") + e.what());
        }
        if (doc.doc_id.empty()) fail_line(path, line_no, "empty doc_id");
        if (!seen.insert(doc.doc_id).second) {
            fail_line(path, line_no, "duplicate doc_id '" + doc.doc_id + "'");
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

void write_documents(const std::vector<VideoDocument>& docs, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (const auto& d : docs) {
        json obj;
        obj["doc_id"] = d.doc_id;
        obj["ocr"] = d.ocr_text;
        obj["asr"] = d.asr_text;
        if (d.mt_ocr) obj["mt_ocr"] = *d.mt_ocr;
        if (d.mt_asr) obj["mt_asr"] = *d.mt_asr;
        out << obj.dump() << '\n';
    }
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

EmbeddingStoreManifest read_manifest(const std::filesystem::path& manifest_path) {
    auto in = open_for_read(manifest_path);
    json obj;
    try {
        obj = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(manifest_path.string() + ": malformed JSON: " + e.what());
    }
    EmbeddingStoreManifest m;
    try {
        m.dim = obj.at("dim").get<std::uint32_t>();
        m.normalized = obj.at("normalized").get<bool>();
        m.source_note = obj.value("source_note", std::string{});
        for (const auto& entry : obj.at("entries")) {
            m.entries.emplace_back(entry.at("doc_id").get<std::string>(),
                                   entry.at("n_frames").get<std::uint32_t>());
        }
    } catch (const json::exception& e) {
        throw ValidationError(manifest_path.string() + ": bad manifest fields: " + e.what());
    }
    if (m.dim == 0) throw ValidationError(manifest_path.string() + ": dim must be positive");
    std::unordered_set<std::string> seen;
    for (const auto& [doc_id, n_frames] : m.entries) {
        if (doc_id.empty()) throw ValidationError(manifest_path.string() + ": empty doc_id");
        if (n_frames == 0) {
            throw ValidationError(manifest_path.string() + ": doc '" + doc_id +
                                  "' has zero frames");
        }
        if (!seen.insert(doc_id).second) {
            throw ValidationError(manifest_path.string() + ": duplicate doc_id '" + doc_id + "'");
        }
    }
    return m;
}

std::vector<FrameEmbeddings> read_embeddings(const std::filesystem::path& manifest_path,
                                             const std::filesystem::path& vectors_path) {
    EmbeddingStoreManifest manifest = read_manifest(manifest_path);

    std::uint64_t total_floats = 0;
    for (const auto& [doc_id, n_frames] : manifest.entries) {
        total_floats += static_cast<std::uint64_t>(n_frames) * manifest.dim;
    }
    const std::uint64_t expected_bytes = total_floats * sizeof(float);
    const auto actual_bytes = static_cast<std::uint64_t>(std::filesystem::file_size(vectors_path));
    if (actual_bytes != expected_bytes) {
        throw ValidationError(vectors_path.string() + ": size mismatch: manifest implies " +
                              std::to_string(expected_bytes) + " bytes, file has " +
                              std::to_string(actual_bytes));
    }

    auto in = open_for_read(vectors_path, std::ios::in | std::ios::binary);
    std::vector<FrameEmbeddings> videos;
    videos.reserve(manifest.entries.size());
    for (const auto& [doc_id, n_frames] : manifest.entries) {
        FrameEmbeddings fe;
        fe.doc_id = doc_id;
        fe.dim = manifest.dim;
        fe.vectors.resize(static_cast<std::size_t>(n_frames) * manifest.dim);
        in.read(reinterpret_cast<char*>(fe.vectors.data()),
                static_cast<std::streamsize>(fe.vectors.size() * sizeof(float)));
        if (!in) throw ValidationError(vectors_path.string() + ": short read for '" + doc_id + "'");

        for (std::uint32_t f = 0; f < n_frames; ++f) {
            float* row = fe.vectors.data() + static_cast<std::size_t>(f) * manifest.dim;
            double norm_sq = 0.0;
            for (std::uint32_t d = 0; d < manifest.dim; ++d) {
                if (!std::isfinite(row[d])) {
                    throw ValidationError(vectors_path.string() + ": non-finite value in '" +
                                          doc_id + "' frame " + std::to_string(f));
                }
                norm_sq += static_cast<double>(row[d]) * row[d];
            }
            const double norm = std::sqrt(norm_sq);
            if (manifest.normalized) {
                if (std::abs(norm - 1.0) > 1e-3) {
                    throw ValidationError(vectors_path.string() + ": '" + doc_id + "' frame " +
                                          std::to_string(f) + " claims normalized but |v| = " +
                                          std::to_string(norm));
                }
            } else {
                if (norm == 0.0) {
                    throw ValidationError(vectors_path.string() + ": zero-norm row in '" +
                                          doc_id + "' frame " + std::to_string(f));
                }
                const float inv = static_cast<float>(1.0 / norm);
                for (std::uint32_t d = 0; d < manifest.dim; ++d) row[d] *= inv;
            }
        }
        videos.push_back(std::move(fe));
    }
    return videos;
}

void write_embeddings(const EmbeddingStoreManifest& manifest,
                      const std::vector<FrameEmbeddings>& videos,
                      const std::filesystem::path& manifest_path,
                      const std::filesystem::path& vectors_path) {
    if (manifest.entries.size() != videos.size()) {
        throw ValidationError("manifest entries and video count disagree");
    }
    json obj;
    obj["dim"] = manifest.dim;
    obj["normalized"] = manifest.normalized;
    obj["source_note"] = manifest.source_note;
    json entries = json::array();
    for (std::size_t i = 0; i < videos.size(); ++i) {
        const auto& [doc_id, n_frames] = manifest.entries[i];
        if (videos[i].doc_id != doc_id || videos[i].n_frames() != n_frames ||
            videos[i].dim != manifest.dim) {
            throw ValidationError("manifest entry '" + doc_id + "' does not match its video data");
        }
        entries.push_back({{"doc_id", doc_id}, {"n_frames", n_frames}});
    }
    obj["entries"] = std::move(entries);

    auto mout = open_for_write(manifest_path);
    mout << obj.dump(2) << '\n';
    if (!mout) throw ValidationError("write failed for '" + manifest_path.string() + "'");

    auto vout = open_for_write(vectors_path, std::ios::out | std::ios::binary);
    for (const auto& v : videos) {
        vout.write(reinterpret_cast<const char*>(v.vectors.data()),
                   static_cast<std::streamsize>(v.vectors.size() * sizeof(float)));
    }
    if (!vout) throw ValidationError("write failed for '" + vectors_path.string() + "'");
}

WeightTable read_weights(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    WeightTable table;
    bool saw_default = false;
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        require_utf8(path, line_no, line);
        if (line[0] == '#') {
            constexpr std::string_view kDefaultKey = "#default_alpha=";
            constexpr std::string_view kProbeKey = "#probe=";
            if (line.rfind(kDefaultKey, 0) == 0) {
                double v = 0.0;
                if (!parse_double(line.substr(kDefaultKey.size()), v)) {
                    fail_line(path, line_no, "unparsable default_alpha");
                }
                if (v < 0.0 || v > 1.0) fail_line(path, line_no, "default_alpha outside [0,1]");
                table.default_alpha = v;
                saw_default = true;
            } else if (line.rfind(kProbeKey, 0) == 0) {
                table.probe_note = line.substr(kProbeKey.size());
            }
            continue;  // other '#' lines are provenance comments
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos) fail_line(path, line_no, "expected doc_id TAB alpha");
        std::string doc_id = line.substr(0, tab);
        double alpha = 0.0;
        if (doc_id.empty()) fail_line(path, line_no, "empty doc_id");
        if (!parse_double(line.substr(tab + 1), alpha)) {
            fail_line(path, line_no, "unparsable alpha");
        }
        if (!(alpha >= 0.0 && alpha <= 1.0)) {
            fail_line(path, line_no, "alpha " + std::to_string(alpha) + " outside [0,1]");
        }
        if (!table.alphas.emplace(std::move(doc_id), alpha).second) {
            fail_line(path, line_no, "duplicate doc_id");
        }
    }
    if (!saw_default) {
        throw ValidationError(path.string() + ": missing '#default_alpha=' header");
    }
    return table;
}

void write_weights(const WeightTable& table, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "#default_alpha=" << format_score(table.default_alpha) << '\n';
    if (!table.probe_note.empty()) out << "#probe=" << table.probe_note << '\n';
    for (const auto& [doc_id, alpha] : table.alphas) {
        if (!(alpha >= 0.0 && alpha <= 1.0)) {
            throw ValidationError("alpha for '" + doc_id + "' outside [0,1]");
        }
        out << doc_id << '\t' << format_score(alpha) << '\n';
    }
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

}  // namespace rankfuse::io
