#include "rankfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rankfuse::eval {

namespace {

double gain_of(int grade, GainFunction gain) {
    if (gain == GainFunction::Linear) return static_cast<double>(grade);
    return std::exp2(static_cast<double>(grade)) - 1.0;
}

// log2(i+1) discount, i is the 1-based rank.
double discount(std::size_t rank) { return std::log2(static_cast<double>(rank) + 1.0); }

}  // namespace

std::string MetricSpec::name() const {
    std::string base = (kind == Kind::Ndcg)
                           ? (gain == GainFunction::Linear ? "ndcg" : "ndcg_exp")
                           : "recall";
    return base + "@" + std::to_string(k);
}

MetricSpec parse_metric(const std::string& name) {
    auto at = name.find('@');
    if (at == std::string::npos) throw ValidationError("metric '" + name + "' missing '@k'");
    const std::string base = name.substr(0, at);
    MetricSpec spec;
    if (base == "ndcg") {
        spec.kind = MetricSpec::Kind::Ndcg;
    } else if (base == "ndcg_exp") {
        spec.kind = MetricSpec::Kind::Ndcg;
        spec.gain = GainFunction::Exponential;
    } else if (base == "recall") {
        spec.kind = MetricSpec::Kind::Recall;
    } else {
        throw ValidationError("unknown metric '" + base + "' (expected ndcg, ndcg_exp, recall)");
    }
    try {
        spec.k = std::stoul(name.substr(at + 1));
    } catch (const std::exception&) {
        throw ValidationError("bad cutoff in metric '" + name + "'");
    }
    if (spec.k < 1) throw std::invalid_argument("metric cutoff k must be >= 1");
    return spec;
}

double ndcg_at_k(const RankedList& list, const Qrels& qrels, std::size_t k, GainFunction gain) {
    if (k < 1) throw std::invalid_argument("ndcg cutoff k must be >= 1");
    auto q = qrels.grades.find(list.qid);
    if (q == qrels.grades.end()) return -1.0;

    std::vector<int> positive_grades;
    for (const auto& [doc_id, grade] : q->second) {
        if (grade > 0) positive_grades.push_back(grade);
    }
    if (positive_grades.empty()) return -1.0;

    double dcg = 0.0;
    const std::size_t n = std::min(k, list.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int grade = qrels.grade(list.qid, list.entries[i].doc_id);
        if (grade > 0) dcg += gain_of(grade, gain) / discount(i + 1);
    }

    std::sort(positive_grades.begin(), positive_grades.end(), std::greater<>());
    double idcg = 0.0;
    const std::size_t ideal_n = std::min(k, positive_grades.size());
    for (std::size_t i = 0; i < ideal_n; ++i) {
        idcg += gain_of(positive_grades[i], gain) / discount(i + 1);
    }
    return dcg / idcg;
}

double recall_at_k(const RankedList& list, const Qrels& qrels, std::size_t k) {
    if (k < 1) throw std::invalid_argument("recall cutoff k must be >= 1");
    auto q = qrels.grades.find(list.qid);
    if (q == qrels.grades.end()) return -1.0;

    std::size_t relevant = 0;
    for (const auto& [doc_id, grade] : q->second) {
        if (grade > 0) ++relevant;
    }
    if (relevant == 0) return -1.0;

    std::size_t hits = 0;
    const std::size_t n = std::min(k, list.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (qrels.grade(list.qid, list.entries[i].doc_id) > 0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(relevant);
}

std::vector<EvalReport> evaluate_run(const std::vector<RankedList>& run, const Qrels& qrels,
                                     const std::vector<MetricSpec>& metrics, bool complete) {
    std::vector<EvalReport> reports;
    reports.reserve(metrics.size());
    for (const auto& spec : metrics) {
        EvalReport report;
        report.metric_name = spec.name();
        double sum = 0.0;
        std::set<std::string> seen_qids;
        for (const auto& list : run) {
            seen_qids.insert(list.qid);
            if (!qrels.has_query(list.qid)) {
                ++report.skipped_unjudged;
                continue;
            }
            const double value = (spec.kind == MetricSpec::Kind::Ndcg)
                                     ? ndcg_at_k(list, qrels, spec.k, spec.gain)
                                     : recall_at_k(list, qrels, spec.k);
            if (value < 0.0) {
                ++report.skipped_no_relevant;
                continue;
            }
            report.per_query.emplace(list.qid, value);
            sum += value;
        }
        if (complete) {
            for (const auto& [qid, docs] : qrels.grades) {
                if (seen_qids.count(qid)) continue;
                const bool any_relevant =
                    std::any_of(docs.begin(), docs.end(),
                                [](const auto& kv) { return kv.second > 0; });
                if (any_relevant) report.per_query.emplace(qid, 0.0);
            }
        }
        report.mean = report.per_query.empty()
                          ? 0.0
                          : sum / static_cast<double>(report.per_query.size());
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace rankfuse::eval
