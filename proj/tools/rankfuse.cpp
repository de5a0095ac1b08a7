// rankfuse: multimodal rank-fusion search engine over precomputed
// transcripts, frame embeddings, runs, and judgments.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 internal.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankfuse/calibrate.hpp"
#include "rankfuse/dense.hpp"
#include "rankfuse/fusion.hpp"
#include "rankfuse/io.hpp"
#include "rankfuse/lexical.hpp"
#include "rankfuse/metrics.hpp"
#include "rankfuse/service.hpp"
#include "rankfuse/stats.hpp"
#include "rankfuse/synth.hpp"
#include "rankfuse/types.hpp"

namespace {

using namespace rankfuse;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct IndexTextArgs {
    std::string docs_path, field = "joint", out_dir;
    double k1 = 0.9, b = 0.4;
};

int cmd_index_text(const IndexTextArgs& args) {
    const auto start = Clock::now();
    auto docs = io::read_documents(args.docs_path);
    auto index = lexical::LexicalIndex::build(
        docs, lexical::parse_field_spec(args.field), args.k1, args.b,
        [&](std::size_t n) { std::printf("indexed %zu/%zu docs\n", n, docs.size()); });
    index.save(args.out_dir);
    std::printf("indexed %zu docs (field=%s, avgdl=%.2f) in %.1f ms\n", index.doc_count(),
                args.field.c_str(), index.avgdl(), ms_since(start));
    return 0;
}

struct IndexDenseArgs {
    std::string manifest, vectors, out_dir;
};

int cmd_index_dense(const IndexDenseArgs& args) {
    const auto start = Clock::now();
    auto videos = io::read_embeddings(args.manifest, args.vectors);
    auto index = dense::DenseIndex::build(videos);
    index.save(args.out_dir);
    std::printf("indexed %zu videos / %zu frames (dim=%u) in %.1f ms\n", index.n_videos(),
                index.n_frames(), index.dim(), ms_since(start));
    return 0;
}

struct CalibrateArgs {
    std::string index_dir, probe_manifest, probe_vectors, out_weights;
    std::string mode = "minmax";
    double fixed_value = 0.5;
    std::string probe_text = calib::kDefaultProbeText;
};

int cmd_calibrate(const CalibrateArgs& args) {
    const auto start = Clock::now();
    auto index = dense::DenseIndex::load(args.index_dir);
    auto probe_store = io::read_embeddings(args.probe_manifest, args.probe_vectors);
    if (probe_store.size() != 1 || probe_store.front().n_frames() != 1) {
        throw ValidationError("probe store must contain exactly one 1-frame entry");
    }

    calib::AlphaParams params;
    if (args.mode == "minmax") {
        params.mode = calib::AlphaMode::MinMax;
    } else if (args.mode == "fixed") {
        params.mode = calib::AlphaMode::Fixed;
        params.fixed_value = args.fixed_value;
    } else {
        throw ValidationError("unknown calibration mode '" + args.mode + "'");
    }

    auto raw = calib::calibration_scores(index, probe_store.front().vectors);
    auto table = calib::scores_to_alphas(raw, params);
    table.probe_note = args.probe_text;
    io::write_weights(table, args.out_weights);
    std::printf("calibrated %zu videos in %.1f ms -> %s\n", table.alphas.size(), ms_since(start),
                args.out_weights.c_str());
    return 0;
}

struct SearchArgs {
    std::string mode, index_dir, queries_path, query_manifest, query_vectors, out_run;
    std::string tag;
    std::size_t top_n = 1000;
    unsigned threads = 1;
};

int cmd_search(const SearchArgs& args) {
    std::vector<RankedList> lists;
    double total_ms = 0.0;
    std::size_t n_queries = 0;

    if (args.mode == "text") {
        if (args.queries_path.empty()) throw ValidationError("text search requires --queries");
        auto index = lexical::LexicalIndex::load(args.index_dir);
        auto queries = io::read_queries(args.queries_path);
        const std::string tag = args.tag.empty() ? "text" : args.tag;
        for (const auto& q : queries) {
            const auto start = Clock::now();
            auto list = index.search(q, args.top_n, tag);
            total_ms += ms_since(start);
            ++n_queries;
            if (!list.entries.empty()) lists.push_back(std::move(list));
        }
    } else if (args.mode == "vision") {
        if (args.query_manifest.empty() || args.query_vectors.empty()) {
            throw ValidationError("vision search requires --query-manifest and --query-vectors");
        }
        auto index = dense::DenseIndex::load(args.index_dir);
        auto queries = io::read_embeddings(args.query_manifest, args.query_vectors);
        const std::string tag = args.tag.empty() ? "vision" : args.tag;
        for (const auto& q : queries) {
            if (q.n_frames() != 1) {
                throw ValidationError("query store entry '" + q.doc_id +
                                      "' must have exactly 1 frame");
            }
            const auto start = Clock::now();
            auto list = index.search(q.vectors, q.doc_id, args.top_n, tag, args.threads);
            total_ms += ms_since(start);
            ++n_queries;
            if (!list.entries.empty()) lists.push_back(std::move(list));
        }
    } else {
        throw ValidationError("unknown search mode '" + args.mode + "' (expected text or vision)");
    }

    io::write_run(lists, args.out_run);
    std::printf("%zu queries, mean latency %.3f ms/query -> %s\n", n_queries,
                n_queries ? total_ms / static_cast<double>(n_queries) : 0.0,
                args.out_run.c_str());
    return 0;
}

struct FuseArgs {
    std::string text_run, vision_run, method, weights_path, out_run, tag;
    double k = 0.0;
    double default_alpha = 0.5;
    std::size_t depth = 0;  // 0: unlimited
    std::size_t output_size = 1000;
};

int cmd_fuse(const FuseArgs& args) {
    const bool wrrf = args.method == "wrrf";
    if (!wrrf && args.method != "rrf") {
        throw ValidationError("unknown fusion method '" + args.method + "'");
    }
    WeightTable weights;
    weights.default_alpha = args.default_alpha;
    if (!args.weights_path.empty()) weights = io::read_weights(args.weights_path);

    std::map<std::string, RankedList> text, vision;
    for (auto& l : io::read_run(args.text_run)) text.emplace(l.qid, std::move(l));
    for (auto& l : io::read_run(args.vision_run)) vision.emplace(l.qid, std::move(l));

    std::vector<std::string> qids;
    for (const auto& [qid, list] : text) qids.push_back(qid);
    for (const auto& [qid, list] : vision) {
        if (!text.count(qid)) qids.push_back(qid);
    }
    std::sort(qids.begin(), qids.end());

    const std::size_t depth = args.depth == 0 ? SIZE_MAX : args.depth;
    const std::string tag = args.tag.empty() ? args.method : args.tag;
    const auto start = Clock::now();
    std::vector<RankedList> fused;
    fused.reserve(qids.size());
    for (const auto& qid : qids) {
        RankedList empty{qid, "", {}};
        const RankedList& t = text.count(qid) ? text.at(qid) : empty;
        const RankedList& v = vision.count(qid) ? vision.at(qid) : empty;
        RankedList out = wrrf ? fusion::wrrf_fuse(t, v, weights, args.k, args.output_size,
                                                  depth, tag)
                              : fusion::rrf_fuse({t, v}, args.k, args.output_size, depth, tag);
        if (!out.entries.empty()) fused.push_back(std::move(out));
    }
    const double total = ms_since(start);

    io::write_run(fused, args.out_run);
    std::printf("fused %zu queries (%s, k=%g), mean %.3f ms/query -> %s\n", qids.size(),
                args.method.c_str(), args.k,
                qids.empty() ? 0.0 : total / static_cast<double>(qids.size()),
                args.out_run.c_str());
    return 0;
}

struct EvalArgs {
    std::string run_path, qrels_path, out_report;
    std::string metrics = "ndcg@10,recall@1,recall@10";
    bool complete = false;
};

int cmd_eval(const EvalArgs& args) {
    auto run = io::read_run(args.run_path);
    auto qrels = io::read_qrels(args.qrels_path);

    std::vector<eval::MetricSpec> specs;
    std::string token;
    std::istringstream ss(args.metrics);
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) specs.push_back(eval::parse_metric(token));
    }
    if (specs.empty()) throw ValidationError("no metrics given");

    auto reports = eval::evaluate_run(run, qrels, specs, args.complete);

    std::ofstream out(args.out_report);
    if (!out) throw ValidationError("cannot open '" + args.out_report + "' for writing");
    for (const auto& r : reports) {
        out << "#" << r.metric_name << " evaluated=" << r.per_query.size()
            << " skipped_unjudged=" << r.skipped_unjudged
            << " skipped_no_relevant=" << r.skipped_no_relevant << '\n';
        for (const auto& [qid, value] : r.per_query) {
            out << r.metric_name << '\t' << qid << '\t';
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", value);
            out << buf << '\n';
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", r.mean);
        out << r.metric_name << '\t' << "mean" << '\t' << buf << '\n';
        std::printf("%s mean=%.4f over %zu queries (skipped: %zu unjudged, %zu no-relevant)\n",
                    r.metric_name.c_str(), r.mean, r.per_query.size(), r.skipped_unjudged,
                    r.skipped_no_relevant);
    }
    if (!out) throw ValidationError("write failed for '" + args.out_report + "'");
    return 0;
}

std::map<std::string, double> load_report_metric(const std::string& path,
                                                 const std::string& metric) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    std::map<std::string, double> per_query;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string name, qid, value;
        if (!std::getline(ss, name, '\t') || !std::getline(ss, qid, '\t') ||
            !std::getline(ss, value)) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
        }
        if (name != metric || qid == "mean") continue;
        per_query[qid] = std::stod(value);
    }
    if (per_query.empty()) {
        throw ValidationError(path + ": no per-query values for metric '" + metric + "'");
    }
    return per_query;
}

struct SigtestArgs {
    std::vector<std::string> reports;
    std::string metric = "ndcg@10";
    std::string out_matrix;
    std::size_t m = 0;
};

int cmd_sigtest(const SigtestArgs& args) {
    if (args.reports.size() < 2) throw ValidationError("sigtest needs at least two reports");
    std::vector<std::pair<std::string, std::map<std::string, double>>> systems;
    for (const auto& path : args.reports) {
        systems.emplace_back(std::filesystem::path(path).stem().string(),
                             load_report_metric(path, args.metric));
    }

    std::ofstream out(args.out_matrix);
    if (!out) throw ValidationError("cannot open '" + args.out_matrix + "' for writing");
    out << "system_a\tsystem_b\tn\tt\tp\tp_adjusted\tsignificant\n";
    for (std::size_t i = 0; i < systems.size(); ++i) {
        for (std::size_t j = i + 1; j < systems.size(); ++j) {
            auto result = eval::paired_t_test(systems[i].second, systems[j].second);
            const double adjusted = eval::bonferroni_adjust(result.p, args.m);
            char buf[128];
            std::snprintf(buf, sizeof(buf), "%.6f\t%.6g\t%.6g\t%d", result.t, result.p, adjusted,
                          adjusted < 0.05 ? 1 : 0);
            out << systems[i].first << '\t' << systems[j].first << '\t' << result.n << '\t' << buf
                << '\n';
        }
    }
    if (!out) throw ValidationError("write failed for '" + args.out_matrix + "'");
    std::printf("wrote significance matrix for %zu systems (m=%zu) -> %s\n", systems.size(),
                args.m, args.out_matrix.c_str());
    return 0;
}

struct ServeArgs {
    service::ServiceConfig config;
    std::string method = "wrrf";
    std::string host = "127.0.0.1";
    int port = 8080;
};

int cmd_serve(ServeArgs& args) {
    if (args.method == "rrf") {
        args.config.default_method = FusionMethod::RRF;
    } else if (args.method == "wrrf") {
        args.config.default_method = FusionMethod::WRRF;
    } else {
        throw ValidationError("unknown fusion method '" + args.method + "'");
    }
    service::SearchService svc(args.config);
    svc.load();
    return service::run_server(svc, args.host, args.port);
}

struct SynthArgs {
    synth::GenerateParams params;
    std::string out_dir;
};

int cmd_synth(const SynthArgs& args) {
    const auto start = Clock::now();
    auto collection = synth::generate(args.params);
    synth::write_collection(collection, args.out_dir);
    std::printf("generated %zu videos, %zu queries (dim=%u, seed=%llu) in %.1f ms -> %s\n",
                collection.documents.size(), collection.queries.size(), args.params.dim,
                static_cast<unsigned long long>(args.params.seed), ms_since(start),
                args.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multimodal rank-fusion search engine"};
    app.require_subcommand(1);
    app.set_config("--config")->description("read options from a TOML/INI experiment config");

    IndexTextArgs index_text;
    auto* sub_it = app.add_subcommand("index-text", "build a BM25 index over extracted text");
    sub_it->add_option("--docs", index_text.docs_path, "documents JSONL")->required();
    sub_it->add_option("--field", index_text.field, "ocr, asr, or joint (default joint)");
    sub_it->add_option("--out", index_text.out_dir, "output index directory")->required();
    sub_it->add_option("--k1", index_text.k1, "BM25 k1 (default 0.9)");
    sub_it->add_option("--b", index_text.b, "BM25 b (default 0.4)");

    IndexDenseArgs index_dense;
    auto* sub_id = app.add_subcommand("index-dense", "build a dense frame index");
    sub_id->add_option("--manifest", index_dense.manifest, "embedding store manifest")->required();
    sub_id->add_option("--vectors", index_dense.vectors, "embedding store payload")->required();
    sub_id->add_option("--out", index_dense.out_dir, "output index directory")->required();

    CalibrateArgs calibrate;
    auto* sub_cal = app.add_subcommand("calibrate", "compute per-video fusion weights");
    sub_cal->add_option("--index", calibrate.index_dir, "dense index directory")->required();
    sub_cal->add_option("--probe-manifest", calibrate.probe_manifest, "probe store manifest")
        ->required();
    sub_cal->add_option("--probe-vectors", calibrate.probe_vectors, "probe store payload")
        ->required();
    sub_cal->add_option("--mode", calibrate.mode, "minmax (default) or fixed");
    sub_cal->add_option("--fixed-value", calibrate.fixed_value, "alpha for --mode fixed");
    sub_cal->add_option("--probe-text", calibrate.probe_text, "probe text recorded in the header");
    sub_cal->add_option("--out", calibrate.out_weights, "output weights TSV")->required();

    SearchArgs search;
    auto* sub_se = app.add_subcommand("search", "run queries against one index");
    sub_se->add_option("--mode", search.mode, "text or vision")->required();
    sub_se->add_option("--index", search.index_dir, "index directory")->required();
    sub_se->add_option("--queries", search.queries_path, "queries TSV (text mode)");
    sub_se->add_option("--query-manifest", search.query_manifest,
                       "query store manifest (vision mode)");
    sub_se->add_option("--query-vectors", search.query_vectors,
                       "query store payload (vision mode)");
    sub_se->add_option("--top-n", search.top_n, "entries per query (default 1000)");
    sub_se->add_option("--tag", search.tag, "run tag (default: the mode)");
    sub_se->add_option("--threads", search.threads, "scoring threads (vision mode)");
    sub_se->add_option("--out", search.out_run, "output run file")->required();

    FuseArgs fuse;
    auto* sub_fu = app.add_subcommand("fuse", "fuse a text run and a vision run");
    sub_fu->add_option("--text", fuse.text_run, "text-modality run file")->required();
    sub_fu->add_option("--vision", fuse.vision_run, "vision-modality run file")->required();
    sub_fu->add_option("--method", fuse.method, "rrf or wrrf")->required();
    sub_fu->add_option("--k", fuse.k, "smoothing constant (explicit per experiment)")->required();
    sub_fu->add_option("--weights", fuse.weights_path, "weights TSV (wrrf)");
    sub_fu->add_option("--default-alpha", fuse.default_alpha,
                       "alpha for unlisted videos (default 0.5)");
    sub_fu->add_option("--depth", fuse.depth, "entries consumed per input list (0 = all)");
    sub_fu->add_option("--output-size", fuse.output_size, "fused entries kept (default 1000)");
    sub_fu->add_option("--tag", fuse.tag, "run tag (default: the method)");
    sub_fu->add_option("--out", fuse.out_run, "output run file")->required();

    EvalArgs eval_args;
    auto* sub_ev = app.add_subcommand("eval", "score a run against qrels");
    sub_ev->add_option("--run", eval_args.run_path, "run file")->required();
    sub_ev->add_option("--qrels", eval_args.qrels_path, "qrels file")->required();
    sub_ev->add_option("--metrics", eval_args.metrics,
                       "comma list (default ndcg@10,recall@1,recall@10)");
    sub_ev->add_flag("--complete", eval_args.complete,
                     "score judged queries missing from the run as 0");
    sub_ev->add_option("--out", eval_args.out_report, "output report TSV")->required();

    SigtestArgs sigtest;
    auto* sub_si = app.add_subcommand("sigtest", "pairwise paired t-tests over eval reports");
    sub_si->add_option("--reports", sigtest.reports, "two or more eval report TSVs")
        ->required()
        ->expected(2, -1);
    sub_si->add_option("--metric", sigtest.metric, "metric to test (default ndcg@10)");
    sub_si->add_option("--m", sigtest.m, "Bonferroni correction test count")->required();
    sub_si->add_option("--out", sigtest.out_matrix, "output matrix TSV")->required();

    ServeArgs serve;
    auto* sub_sv = app.add_subcommand("serve", "HTTP query service");
    sub_sv->add_option("--text-index", serve.config.text_index_dir, "lexical index directory");
    sub_sv->add_option("--dense-index", serve.config.dense_index_dir, "dense index directory");
    sub_sv->add_option("--weights", serve.config.weights_path, "weights TSV");
    sub_sv->add_option("--method", serve.method, "default fusion method (default wrrf)");
    sub_sv->add_option("--k", serve.config.default_k, "default smoothing constant");
    sub_sv->add_option("--default-alpha", serve.config.default_alpha,
                       "default alpha when no weights file");
    sub_sv->add_option("--top-n", serve.config.default_top_n, "default result count");
    sub_sv->add_option("--host", serve.host, "bind host (default 127.0.0.1)");
    sub_sv->add_option("--port", serve.port, "bind port (default 8080)");

    SynthArgs synth_args;
    auto* sub_sy = app.add_subcommand("synth", "generate a synthetic benchmark collection");
    sub_sy->add_option("--seed", synth_args.params.seed, "RNG seed (default 42)");
    sub_sy->add_option("--videos", synth_args.params.n_videos, "video count (default 1000)");
    sub_sy->add_option("--queries", synth_args.params.n_queries, "query count (default 100)");
    sub_sy->add_option("--dim", synth_args.params.dim, "embedding dim (default 64)");
    sub_sy->add_option("--text-reliable-fraction", synth_args.params.text_reliable_fraction,
                       "share of videos with reliable text (default 0.5)");
    sub_sy->add_option("--noise", synth_args.params.noise, "signal degradation in [0,1]");
    sub_sy->add_option("--out", synth_args.out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sub_it->parsed()) return cmd_index_text(index_text);
        if (sub_id->parsed()) return cmd_index_dense(index_dense);
        if (sub_cal->parsed()) return cmd_calibrate(calibrate);
        if (sub_se->parsed()) return cmd_search(search);
        if (sub_fu->parsed()) return cmd_fuse(fuse);
        if (sub_ev->parsed()) return cmd_eval(eval_args);
        if (sub_si->parsed()) return cmd_sigtest(sigtest);
        if (sub_sv->parsed()) return cmd_serve(serve);
        if (sub_sy->parsed()) return cmd_synth(synth_args);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
