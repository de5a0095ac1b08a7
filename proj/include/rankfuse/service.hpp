#pragma once

/** \file service.hpp
 *  \brief Query-serving core behind the HTTP endpoints.
 *
 * Indexes and weights load once at startup and are immutable afterwards;
 * fusion happens online per request. The JSON handling lives here, separate
 * from the HTTP wiring, so the contract is testable in-process.
 */

#include <atomic>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "rankfuse/dense.hpp"
#include "rankfuse/lexical.hpp"
#include "rankfuse/types.hpp"

namespace httplib {
class Server;
}

namespace rankfuse::service {

struct ServiceConfig {
    std::string text_index_dir;   // empty: text modality unavailable
    std::string dense_index_dir;  // empty: vision modality unavailable
    std::string weights_path;     // empty: default_alpha only
    FusionMethod default_method{FusionMethod::WRRF};
    double default_k{0.0};
    double default_alpha{0.5};
    std::size_t default_top_n{10};
};

/** \brief Outcome of one /search request: an HTTP status plus a JSON body. */
struct SearchResponse {
    int status{200};
    nlohmann::json body;
};

class SearchService {
public:
    explicit SearchService(ServiceConfig config) : config_(std::move(config)) {}

    /// Load every configured index; flips ready() on success.
    void load();

    bool ready() const { return ready_.load(std::memory_order_acquire); }

    /// Handle the /search contract. Thread-safe over the loaded state.
    /// Returns 400 for malformed bodies or missing modality inputs and 503
    /// before load() completes.
    SearchResponse search(const std::string& request_body) const;

    /// Handle GET /healthz.
    SearchResponse healthz() const;

    const ServiceConfig& config() const { return config_; }

private:
    ServiceConfig config_;
    std::optional<lexical::LexicalIndex> text_index_;
    std::optional<dense::DenseIndex> dense_index_;
    WeightTable weights_;
    std::atomic<bool> ready_{false};
};

/// Wire GET /healthz and POST /search onto an httplib server.
void attach_routes(httplib::Server& server, SearchService& service);

/// Blocking HTTP server on the given host/port. Used by the CLI.
int run_server(SearchService& service, const std::string& host, int port);

}  // namespace rankfuse::service
