#pragma once

/** \file metrics.hpp
 *  \brief Ranked-retrieval metrics: nDCG@k and Recall@k, plus whole-run
 *  evaluation into per-query reports.
 *
 * nDCG uses linear gain with a log2(i+1) discount by default; exponential
 * gain (2^grade - 1) sits behind a flag. Queries with no judged-relevant
 * documents are excluded from means and counted in the report.
 */

#include <cstddef>
#include <string>
#include <vector>

#include "rankfuse/types.hpp"

namespace rankfuse::eval {

enum class GainFunction { Linear, Exponential };

/** \brief One metric to compute, e.g. ndcg@10 or recall@1. */
struct MetricSpec {
    enum class Kind { Ndcg, Recall };
    Kind kind{Kind::Ndcg};
    std::size_t k{10};
    GainFunction gain{GainFunction::Linear};

    std::string name() const;
};

/// Parse "ndcg@10" / "recall@1" style names.
MetricSpec parse_metric(const std::string& name);

/// DCG@k / IDCG@k for one query; -1 signals "no relevant documents" and the
/// query must be skipped by the caller.
double ndcg_at_k(const RankedList& list, const Qrels& qrels, std::size_t k,
                 GainFunction gain = GainFunction::Linear);

/// Fraction of the query's relevant documents (grade >= 1) in the top k;
/// -1 signals "no relevant documents".
double recall_at_k(const RankedList& list, const Qrels& qrels, std::size_t k);

/// Apply the metrics to every query of the run. Run queries without any
/// judgments are counted in skipped_unjudged; judged queries with zero
/// relevant documents in skipped_no_relevant. The mean is the arithmetic
/// mean over the evaluated queries. With complete=true, qrels queries that
/// have relevant documents but are missing from the run score 0 (trec_eval's
/// -c behavior), which keeps system comparisons on a shared query set.
std::vector<EvalReport> evaluate_run(const std::vector<RankedList>& run, const Qrels& qrels,
                                     const std::vector<MetricSpec>& metrics,
                                     bool complete = false);

}  // namespace rankfuse::eval
