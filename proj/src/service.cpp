#include "rankfuse/service.hpp"

#include <chrono>
#include <cstdio>
#include <vector>

#include <httplib.h>

#include "rankfuse/fusion.hpp"
#include "rankfuse/io.hpp"

namespace rankfuse::service {

namespace {

using nlohmann::json;

SearchResponse error_response(int status, const std::string& message) {
    return SearchResponse{status, json{{"error", message}}};
}

json entry_to_json(const RankedEntry& e, const RankedList* text, const RankedList* vision) {
    json per_modality = json::object();
    auto rank_in = [](const RankedList* list, const std::string& doc_id) -> json {
        if (!list) return nullptr;
        for (const auto& entry : list->entries) {
            if (entry.doc_id == doc_id) return entry.rank;
        }
        return nullptr;
    };
    per_modality["text"] = rank_in(text, e.doc_id);
    per_modality["vision"] = rank_in(vision, e.doc_id);
    return json{{"doc_id", e.doc_id},
                {"score", e.score},
                {"rank", e.rank},
                {"per_modality_ranks", per_modality}};
}

}  // namespace

void SearchService::load() {
    if (!config_.text_index_dir.empty()) {
        text_index_ = lexical::LexicalIndex::load(config_.text_index_dir);
    }
    if (!config_.dense_index_dir.empty()) {
        dense_index_ = dense::DenseIndex::load(config_.dense_index_dir);
    }
    if (!config_.weights_path.empty()) {
        weights_ = io::read_weights(config_.weights_path);
    } else {
        weights_.default_alpha = config_.default_alpha;
    }
    if (!text_index_ && !dense_index_) {
        throw ValidationError("service needs at least one index configured");
    }
    ready_.store(true, std::memory_order_release);
}

SearchResponse SearchService::healthz() const {
    return SearchResponse{200, json{{"status", "ok"}, {"ready", ready()}}};
}

SearchResponse SearchService::search(const std::string& request_body) const {
    if (!ready()) return error_response(503, "indexes are not loaded yet");
    const auto started = std::chrono::steady_clock::now();

    json body;
    try {
        body = json::parse(request_body);
    } catch (const json::exception& e) {
        return error_response(400, std::string("malformed JSON body: ") + e.what());
    }
    if (!body.is_object()) return error_response(400, "request body must be a JSON object");

    try {
        if (!body.contains("modalities") || !body["modalities"].is_array() ||
            body["modalities"].empty()) {
            return error_response(400, "modalities must be a non-empty array");
        }
        bool want_text = false;
        bool want_vision = false;
        for (const auto& m : body["modalities"]) {
            const std::string name = m.get<std::string>();
            if (name == "text") {
                want_text = true;
            } else if (name == "vision") {
                want_vision = true;
            } else {
                return error_response(400, "unknown modality '" + name + "'");
            }
        }
        if (want_text && !text_index_) return error_response(400, "text index not loaded");
        if (want_vision && !dense_index_) return error_response(400, "dense index not loaded");
        if (want_text && (!body.contains("query_text") || !body["query_text"].is_string() ||
                          body["query_text"].get<std::string>().empty())) {
            return error_response(400, "text modality requires query_text");
        }
        if (want_vision && (!body.contains("query_vector") || !body["query_vector"].is_array())) {
            return error_response(400, "vision modality requires query_vector");
        }

        const auto top_n = body.value("top_n", config_.default_top_n);
        if (top_n < 1) return error_response(400, "top_n must be >= 1");

        FusionMethod method = config_.default_method;
        double k = config_.default_k;
        double default_alpha = weights_.default_alpha;
        if (body.contains("fusion")) {
            const auto& f = body["fusion"];
            if (!f.is_object()) return error_response(400, "fusion must be an object");
            if (f.contains("method")) {
                const std::string name = f["method"].get<std::string>();
                if (name == "rrf") {
                    method = FusionMethod::RRF;
                } else if (name == "wrrf") {
                    method = FusionMethod::WRRF;
                } else {
                    return error_response(400, "unknown fusion method '" + name + "'");
                }
            }
            k = f.value("k", k);
            if (k < 0.0) return error_response(400, "fusion k must be >= 0");
            default_alpha = f.value("default_alpha", default_alpha);
            if (default_alpha < 0.0 || default_alpha > 1.0) {
                return error_response(400, "default_alpha must lie in [0,1]");
            }
        }

        // The candidate pool spans the whole collection; truncation happens
        // only after fusion.
        static constexpr const char* kQid = "live";
        RankedList text_list, vision_list;
        if (want_text) {
            QueryRecord query{kQid, body["query_text"].get<std::string>()};
            text_list = text_index_->search(query, text_index_->doc_count());
        }
        if (want_vision) {
            std::vector<float> vec;
            for (const auto& v : body["query_vector"]) {
                if (!v.is_number()) return error_response(400, "query_vector must hold numbers");
                vec.push_back(v.get<float>());
            }
            if (vec.size() != dense_index_->dim()) {
                return error_response(400, "query_vector has dim " + std::to_string(vec.size()) +
                                               ", index has " +
                                               std::to_string(dense_index_->dim()));
            }
            vision_list = dense_index_->search(vec, kQid, dense_index_->n_videos());
        }

        RankedList fused;
        if (want_text && want_vision) {
            if (method == FusionMethod::WRRF) {
                WeightTable weights = weights_;
                weights.default_alpha = default_alpha;
                fused = fusion::wrrf_fuse(text_list, vision_list, weights, k, top_n);
            } else {
                fused = fusion::rrf_fuse({text_list, vision_list}, k, top_n);
            }
        } else {
            fused = want_text ? text_list : vision_list;
            if (fused.entries.size() > static_cast<std::size_t>(top_n)) {
                fused.entries.resize(top_n);
            }
        }

        json results = json::array();
        for (const auto& e : fused.entries) {
            results.push_back(entry_to_json(e, want_text ? &text_list : nullptr,
                                            want_vision ? &vision_list : nullptr));
        }
        const auto elapsed = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
        return SearchResponse{200, json{{"results", std::move(results)},
                                        {"latency_ms", elapsed}}};
    } catch (const json::exception& e) {
        return error_response(400, std::string("bad request field: ") + e.what());
    } catch (const ValidationError& e) {
        return error_response(400, e.what());
    }
}

void attach_routes(httplib::Server& server, SearchService& service) {
    server.Get("/healthz", [&service](const httplib::Request&, httplib::Response& res) {
        auto out = service.healthz();
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    });
    server.Post("/search", [&service](const httplib::Request& req, httplib::Response& res) {
        auto out = service.search(req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    });
}

int run_server(SearchService& service, const std::string& host, int port) {
    httplib::Server server;
    attach_routes(server, service);
    std::printf("serving on http://%s:%d (text=%s, vision=%s)\n", host.c_str(), port,
                service.config().text_index_dir.empty() ? "off" : "on",
                service.config().dense_index_dir.empty() ? "off" : "on");
    std::fflush(stdout);
    return server.listen(host, port) ? 0 : 3;
}

}  // namespace rankfuse::service
