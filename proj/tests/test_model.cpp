#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "rankfuse/types.hpp"

using namespace rankfuse;
using testing_helpers::TestRng;

TEST_CASE("canonicalize sorts by score descending", "[model]") {
    RankedList list{"q1", "t", {{"B", 0, 2.0}, {"A", 0, 3.0}}};
    auto out = canonicalize(list);
    REQUIRE(out.entries.size() == 2);
    CHECK(out.entries[0].doc_id == "A");
    CHECK(out.entries[0].rank == 1);
    CHECK(out.entries[1].doc_id == "B");
    CHECK(out.entries[1].rank == 2);
}

TEST_CASE("canonicalize breaks score ties by doc_id byte order", "[model]") {
    RankedList list{"q1", "t", {{"B", 0, 1.0}, {"A", 0, 1.0}}};
    auto out = canonicalize(list);
    CHECK(out.entries[0].doc_id == "A");
    CHECK(out.entries[1].doc_id == "B");
}

TEST_CASE("canonicalize rejects non-finite scores naming the doc", "[model]") {
    RankedList list{"q1", "t", {{"ok", 0, 1.0}, {"bad", 0, std::nan("")}}};
    REQUIRE_THROWS_MATCHES(canonicalize(list), ValidationError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("bad")));
    RankedList inf_list{"q1", "t", {{"inf_doc", 0, INFINITY}}};
    REQUIRE_THROWS_AS(canonicalize(inf_list), ValidationError);
}

TEST_CASE("canonicalize rejects duplicate doc_ids", "[model]") {
    RankedList list{"q1", "t", {{"A", 0, 2.0}, {"A", 0, 1.0}}};
    REQUIRE_THROWS_AS(canonicalize(list), ValidationError);
}

TEST_CASE("canonicalize is idempotent and permutation-invariant", "[model][property]") {
    TestRng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        auto list = testing_helpers::random_ranked_list(rng, "q", 200, 50);

        auto once = canonicalize(list);
        auto twice = canonicalize(once);
        REQUIRE(once.entries.size() == twice.entries.size());
        for (std::size_t i = 0; i < once.entries.size(); ++i) {
            CHECK(once.entries[i].doc_id == twice.entries[i].doc_id);
            CHECK(once.entries[i].rank == twice.entries[i].rank);
            CHECK(once.entries[i].score == twice.entries[i].score);
        }

        auto shuffled = list;
        for (std::size_t i = shuffled.entries.size(); i > 1; --i) {
            std::swap(shuffled.entries[i - 1], shuffled.entries[rng.index(i)]);
        }
        auto from_shuffled = canonicalize(shuffled);
        for (std::size_t i = 0; i < once.entries.size(); ++i) {
            CHECK(once.entries[i].doc_id == from_shuffled.entries[i].doc_id);
        }

        for (std::size_t i = 1; i < once.entries.size(); ++i) {
            CHECK(once.entries[i - 1].score >= once.entries[i].score);
            CHECK(once.entries[i].rank == once.entries[i - 1].rank + 1);
        }
        if (!once.entries.empty()) CHECK(once.entries[0].rank == 1);
    }
}

TEST_CASE("weight table falls back to default alpha", "[model]") {
    WeightTable table;
    table.default_alpha = 0.25;
    table.alphas["v1"] = 0.9;
    CHECK(table.alpha_for("v1") == 0.9);
    CHECK(table.alpha_for("unknown") == 0.25);
}
