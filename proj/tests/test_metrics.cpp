#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "oracles.hpp"
#include "rankfuse/metrics.hpp"

using namespace rankfuse;
using testing_helpers::TestRng;

namespace {

RankedList make_list(const std::string& qid, std::vector<std::string> docs) {
    RankedList list{qid, "t", {}};
    double score = static_cast<double>(docs.size());
    for (auto& d : docs) {
        list.entries.push_back(RankedEntry{std::move(d), 0, score});
        score -= 1.0;
    }
    return canonicalize(std::move(list));
}

Qrels make_qrels(const std::string& qid, std::map<std::string, int> grades) {
    Qrels qrels;
    qrels.grades[qid] = std::move(grades);
    return qrels;
}

}  // namespace

TEST_CASE("ideal ordering scores exactly 1", "[metrics]") {
    auto qrels = make_qrels("q", {{"a", 3}, {"b", 2}, {"c", 1}});
    auto list = make_list("q", {"a", "b", "c"});
    CHECK(eval::ndcg_at_k(list, qrels, 10) == 1.0);
    CHECK(eval::recall_at_k(list, qrels, 10) == 1.0);
}

TEST_CASE("single relevant at rank 2 gives the closed-form nDCG", "[metrics]") {
    auto qrels = make_qrels("q", {{"hit", 1}});
    auto list = make_list("q", {"miss", "hit", "other"});
    CHECK(eval::ndcg_at_k(list, qrels, 10) ==
          Catch::Approx(0.6309297535714575).margin(1e-5));
}

TEST_CASE("four-doc fixture matches the frozen reference value", "[metrics]") {
    // run [d3(g2), d1(g0), d2(g1), d4(g3)], ideal grades 3,2,1
    auto qrels = make_qrels("q", {{"d3", 2}, {"d2", 1}, {"d4", 3}});
    auto list = make_list("q", {"d3", "d1", "d2", "d4"});
    CHECK(eval::ndcg_at_k(list, qrels, 4) ==
          Catch::Approx(0.7963337995444919).margin(1e-12));
}

TEST_CASE("recall direct counts", "[metrics]") {
    auto qrels = make_qrels("q", {{"a", 1}});
    CHECK(eval::recall_at_k(make_list("q", {"a"}), qrels, 1) == 1.0);

    auto qrels4 = make_qrels("q", {{"a", 1}, {"b", 1}, {"c", 2}, {"d", 1}});
    std::vector<std::string> docs{"a"};
    for (int i = 0; i < 9; ++i) docs.push_back("x" + std::to_string(i));
    CHECK(eval::recall_at_k(make_list("q", docs), qrels4, 10) == 0.25);
}

TEST_CASE("recall is non-decreasing in k", "[metrics][property]") {
    TestRng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        auto list = testing_helpers::random_ranked_list(rng, "q", 50, 30);
        std::map<std::string, int> grades;
        for (int i = 0; i < 10; ++i) {
            grades["d" + std::to_string(rng.index(50))] = static_cast<int>(rng.index(3));
        }
        auto qrels = make_qrels("q", grades);
        double prev = 0.0;
        bool any_relevant = false;
        for (const auto& [doc, g] : grades) any_relevant |= g > 0;
        if (!any_relevant) continue;
        for (std::size_t k = 1; k <= 50; ++k) {
            const double r = eval::recall_at_k(list, qrels, k);
            CHECK(r >= prev);
            prev = r;
        }
    }
}

TEST_CASE("queries with no relevant docs are flagged for skipping", "[metrics]") {
    auto qrels = make_qrels("q", {{"a", 0}});
    auto list = make_list("q", {"a", "b"});
    CHECK(eval::ndcg_at_k(list, qrels, 10) == -1.0);
    CHECK(eval::recall_at_k(list, qrels, 10) == -1.0);
}

TEST_CASE("metric of a truncated run equals metric of the full run", "[metrics][property]") {
    TestRng rng(72);
    for (int trial = 0; trial < 20; ++trial) {
        auto list = testing_helpers::random_ranked_list(rng, "q", 100, 60);
        std::map<std::string, int> grades;
        for (int i = 0; i < 12; ++i) {
            grades["d" + std::to_string(rng.index(100))] = 1 + static_cast<int>(rng.index(3));
        }
        auto qrels = make_qrels("q", grades);

        const std::size_t k = 10;
        auto truncated = list;
        truncated.entries.resize(std::min<std::size_t>(k, truncated.entries.size()));
        truncated = canonicalize(std::move(truncated));

        CHECK(eval::ndcg_at_k(list, qrels, k) == eval::ndcg_at_k(truncated, qrels, k));
        CHECK(eval::recall_at_k(list, qrels, k) == eval::recall_at_k(truncated, qrels, k));
    }
}

TEST_CASE("metrics are invariant to consistent doc relabeling", "[metrics][property]") {
    TestRng rng(73);
    auto list = testing_helpers::random_ranked_list(rng, "q", 40, 25);
    std::map<std::string, int> grades;
    for (int i = 0; i < 8; ++i) {
        grades["d" + std::to_string(rng.index(40))] = 1 + static_cast<int>(rng.index(2));
    }
    auto qrels = make_qrels("q", grades);

    auto relabel = [](const std::string& id) { return "relabeled_" + id; };
    RankedList renamed = list;
    for (auto& e : renamed.entries) e.doc_id = relabel(e.doc_id);
    renamed = canonicalize(std::move(renamed));
    std::map<std::string, int> renamed_grades;
    for (const auto& [doc, g] : grades) renamed_grades[relabel(doc)] = g;
    auto renamed_qrels = make_qrels("q", renamed_grades);

    CHECK(eval::ndcg_at_k(list, qrels, 10) ==
          Catch::Approx(eval::ndcg_at_k(renamed, renamed_qrels, 10)).margin(1e-12));
    CHECK(eval::recall_at_k(list, qrels, 10) ==
          Catch::Approx(eval::recall_at_k(renamed, renamed_qrels, 10)).margin(1e-12));
}

TEST_CASE("randomized fixtures match the independent reference", "[metrics][oracle]") {
    TestRng rng(74);
    for (int trial = 0; trial < 10; ++trial) {
        auto list = testing_helpers::random_ranked_list(rng, "q", 200, 80);
        std::map<std::string, int> grades;
        for (int i = 0; i < 20; ++i) {
            grades["d" + std::to_string(rng.index(200))] = static_cast<int>(rng.index(4));
        }
        auto qrels = make_qrels("q", grades);

        std::vector<std::string> ranking;
        for (const auto& e : list.entries) ranking.push_back(e.doc_id);

        for (std::size_t k : {1u, 5u, 10u, 20u}) {
            const double nd_ref = oracles::ndcg_reference(ranking, grades, k);
            const double rc_ref = oracles::recall_reference(ranking, grades, k);
            if (nd_ref < 0.0) continue;
            CHECK(eval::ndcg_at_k(list, qrels, k) == Catch::Approx(nd_ref).margin(1e-6));
            CHECK(eval::recall_at_k(list, qrels, k) == Catch::Approx(rc_ref).margin(1e-6));
        }
    }
}

TEST_CASE("evaluate_run aggregates, skips, and counts", "[metrics]") {
    Qrels qrels;
    qrels.grades["q1"] = {{"a", 1}};
    qrels.grades["q2"] = {{"b", 0}};  // judged, nothing relevant
    qrels.grades["q4"] = {{"c", 2}};  // not in run

    std::vector<RankedList> run{
        make_list("q1", {"a", "x"}),
        make_list("q2", {"b"}),
        make_list("q3", {"y"}),  // unjudged
    };

    auto reports = eval::evaluate_run(run, qrels, {eval::parse_metric("ndcg@10")});
    REQUIRE(reports.size() == 1);
    const auto& r = reports[0];
    CHECK(r.metric_name == "ndcg@10");
    CHECK(r.per_query.size() == 1);
    CHECK(r.per_query.at("q1") == 1.0);
    CHECK(r.mean == 1.0);
    CHECK(r.skipped_unjudged == 1);
    CHECK(r.skipped_no_relevant == 1);

    auto complete = eval::evaluate_run(run, qrels, {eval::parse_metric("ndcg@10")}, true);
    CHECK(complete[0].per_query.size() == 2);
    CHECK(complete[0].per_query.at("q4") == 0.0);
    CHECK(complete[0].mean == 0.5);
}

TEST_CASE("metric parsing", "[metrics]") {
    auto spec = eval::parse_metric("ndcg@10");
    CHECK(spec.kind == eval::MetricSpec::Kind::Ndcg);
    CHECK(spec.k == 10);
    CHECK(spec.name() == "ndcg@10");

    auto exp_spec = eval::parse_metric("ndcg_exp@5");
    CHECK(exp_spec.gain == eval::GainFunction::Exponential);

    CHECK(eval::parse_metric("recall@1").kind == eval::MetricSpec::Kind::Recall);
    CHECK_THROWS_AS(eval::parse_metric("map@10"), ValidationError);
    CHECK_THROWS_AS(eval::parse_metric("ndcg"), ValidationError);
    CHECK_THROWS_AS(eval::parse_metric("ndcg@0"), std::invalid_argument);
}

TEST_CASE("exponential gain differs from linear only for grades above 1", "[metrics]") {
    auto qrels = make_qrels("q", {{"a", 2}, {"b", 1}});
    auto list = make_list("q", {"b", "a"});
    const double linear = eval::ndcg_at_k(list, qrels, 10, eval::GainFunction::Linear);
    const double expo = eval::ndcg_at_k(list, qrels, 10, eval::GainFunction::Exponential);
    CHECK(linear != expo);

    auto binary_qrels = make_qrels("q", {{"a", 1}, {"b", 1}});
    CHECK(eval::ndcg_at_k(list, binary_qrels, 10, eval::GainFunction::Linear) ==
          eval::ndcg_at_k(list, binary_qrels, 10, eval::GainFunction::Exponential));
}
