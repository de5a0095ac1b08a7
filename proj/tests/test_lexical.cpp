#include <catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "rankfuse/io.hpp"
#include "rankfuse/lexical.hpp"

using namespace rankfuse;
using lexical::FieldSpec;
using lexical::LexicalIndex;
using testing_helpers::TempDir;

namespace {

VideoDocument doc(std::string id, std::string ocr, std::string asr = "") {
    return VideoDocument{std::move(id), std::move(ocr), std::move(asr), {}, {}};
}

}  // namespace

TEST_CASE("single-doc corpus matches the closed-form BM25 value", "[lexical]") {
    auto index = LexicalIndex::build({doc("d1", "red car")}, FieldSpec::Ocr, 0.9, 0.4);
    auto result = index.search(QueryRecord{"q", "red"}, 10);
    REQUIRE(result.entries.size() == 1);
    // idf = ln(1 + 0.5/1.5) = ln(4/3); tf part = 1.9/1.9 = 1 at dl = avgdl
    CHECK(result.entries[0].score == Catch::Approx(0.28768207245178085).margin(1e-10));
}

TEST_CASE("toy corpus scores match the hand-computed expansion", "[lexical]") {
    // Frozen from an independent spreadsheet-style per-term expansion
    // (k1=0.9, b=0.4, avgdl=11/3).
    std::vector<VideoDocument> docs{
        doc("d1", "red car fast red"),
        doc("d2", "blue car"),
        doc("d3", "red bus slow city night"),
    };
    auto index = LexicalIndex::build(docs, FieldSpec::Ocr, 0.9, 0.4);

    auto score_of = [&](const RankedList& list, const std::string& id) {
        for (const auto& e : list.entries) {
            if (e.doc_id == id) return e.score;
        }
        return -1.0;
    };

    auto red_car = index.search(QueryRecord{"q", "red car"}, 10);
    REQUIRE(red_car.entries.size() == 3);
    CHECK(score_of(red_car, "d1") == Catch::Approx(1.0710391232).margin(1e-4));
    CHECK(score_of(red_car, "d2") == Catch::Approx(0.5142971650).margin(1e-4));
    CHECK(score_of(red_car, "d3") == Catch::Approx(0.4397079611).margin(1e-4));

    auto red = index.search(QueryRecord{"q", "red"}, 10);
    REQUIRE(red.entries.size() == 2);
    CHECK(score_of(red, "d1") == Catch::Approx(0.6089941631).margin(1e-4));
    CHECK(score_of(red, "d3") == Catch::Approx(0.4397079611).margin(1e-4));

    auto city_night = index.search(QueryRecord{"q", "city night"}, 10);
    REQUIRE(city_night.entries.size() == 1);
    CHECK(score_of(city_night, "d3") == Catch::Approx(1.8352131950).margin(1e-4));

    // duplicate query terms contribute once per occurrence
    auto red_red = index.search(QueryRecord{"q", "red red"}, 10);
    CHECK(score_of(red_red, "d1") == Catch::Approx(1.2179883263).margin(1e-4));
    CHECK(score_of(red_red, "d3") == Catch::Approx(0.8794159222).margin(1e-4));
}

TEST_CASE("absent terms contribute nothing", "[lexical]") {
    auto index = LexicalIndex::build({doc("d1", "red car")}, FieldSpec::Ocr);
    CHECK(index.search(QueryRecord{"q", "zeppelin"}, 10).entries.empty());
    auto partial = index.search(QueryRecord{"q", "red zeppelin"}, 10);
    REQUIRE(partial.entries.size() == 1);
    CHECK(partial.entries[0].score == Catch::Approx(0.28768207245178085).margin(1e-10));
}

TEST_CASE("empty query yields an empty list, not an error", "[lexical]") {
    auto index = LexicalIndex::build({doc("d1", "red car")}, FieldSpec::Ocr);
    CHECK(index.search(QueryRecord{"q", "!!!"}, 10).entries.empty());
}

TEST_CASE("empty-field documents are never returned", "[lexical]") {
    auto index = LexicalIndex::build({doc("d1", "red"), doc("d2", "")}, FieldSpec::Ocr);
    auto result = index.search(QueryRecord{"q", "red"}, 10);
    REQUIRE(result.entries.size() == 1);
    CHECK(result.entries[0].doc_id == "d1");
}

TEST_CASE("duplicate doc_ids are rejected at build", "[lexical]") {
    REQUIRE_THROWS_AS(LexicalIndex::build({doc("d1", "a"), doc("d1", "b")}, FieldSpec::Ocr),
                      ValidationError);
    REQUIRE_THROWS_AS(LexicalIndex::build({}, FieldSpec::Ocr), ValidationError);
}

TEST_CASE("BM25 scores are non-negative and monotone in tf", "[lexical][property]") {
    // Same document length, increasing tf of the query term.
    std::vector<VideoDocument> docs{
        doc("d1", "red pad pad pad"),
        doc("d2", "red red pad pad"),
        doc("d3", "red red red pad"),
        doc("d4", "pad pad pad pad"),
    };
    auto index = LexicalIndex::build(docs, FieldSpec::Ocr);
    auto result = index.search(QueryRecord{"q", "red"}, 10);
    REQUIRE(result.entries.size() == 3);
    CHECK(result.entries[0].doc_id == "d3");
    CHECK(result.entries[1].doc_id == "d2");
    CHECK(result.entries[2].doc_id == "d1");
    for (const auto& e : result.entries) CHECK(e.score > 0.0);
}

TEST_CASE("joint field equals ocr when all asr fields are empty", "[lexical][property]") {
    std::vector<VideoDocument> docs{
        doc("d1", "red car fast"),
        doc("d2", "blue car"),
        doc("d3", "red bus city"),
    };
    auto joint = LexicalIndex::build(docs, FieldSpec::Joint);
    auto ocr = LexicalIndex::build(docs, FieldSpec::Ocr);
    for (const std::string text : {"red", "car city", "blue red car"}) {
        auto a = joint.search(QueryRecord{"q", text}, 10);
        auto b = ocr.search(QueryRecord{"q", text}, 10);
        REQUIRE(a.entries.size() == b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            CHECK(a.entries[i].doc_id == b.entries[i].doc_id);
            CHECK(a.entries[i].score == Catch::Approx(b.entries[i].score));
        }
    }
}

TEST_CASE("joint field concatenates ocr, asr, and translations", "[lexical]") {
    VideoDocument d{"d1", "alpha", "beta", "gamma", "delta"};
    CHECK(lexical::select_field(d, FieldSpec::Joint) == "alpha beta gamma delta");
    CHECK(lexical::select_field(d, FieldSpec::Ocr) == "alpha");
    CHECK(lexical::select_field(d, FieldSpec::Asr) == "beta");

    auto index = LexicalIndex::build({d}, FieldSpec::Joint);
    CHECK_FALSE(index.search(QueryRecord{"q", "delta"}, 10).entries.empty());
    auto ocr_only = LexicalIndex::build({d}, FieldSpec::Ocr);
    CHECK(ocr_only.search(QueryRecord{"q", "delta"}, 10).entries.empty());
}

TEST_CASE("index persists and reloads identically", "[lexical]") {
    TempDir dir("lexidx");
    std::vector<VideoDocument> docs{
        doc("d1", "red car fast red", "engine noise"),
        doc("d2", "blue car", "street sounds"),
        doc("d3", "red bus slow city night", ""),
    };
    auto index = LexicalIndex::build(docs, FieldSpec::Joint, 1.2, 0.75);
    index.save(dir.path());
    auto loaded = LexicalIndex::load(dir.path());

    CHECK(loaded.doc_count() == index.doc_count());
    CHECK(loaded.avgdl() == index.avgdl());
    CHECK(loaded.k1() == index.k1());
    CHECK(loaded.b() == index.b());
    CHECK(loaded.field() == FieldSpec::Joint);

    for (const std::string text : {"red", "car", "engine street", "night"}) {
        auto a = index.search(QueryRecord{"q", text}, 10);
        auto b = loaded.search(QueryRecord{"q", text}, 10);
        REQUIRE(a.entries.size() == b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            CHECK(a.entries[i].doc_id == b.entries[i].doc_id);
            CHECK(a.entries[i].score == b.entries[i].score);
        }
    }
}

TEST_CASE("build and search are deterministic end to end", "[lexical][property]") {
    TempDir dir("lexdet");
    std::vector<VideoDocument> docs;
    testing_helpers::TestRng rng(3);
    for (int i = 0; i < 50; ++i) {
        std::string text;
        for (std::size_t w = 0; w < 5 + rng.index(10); ++w) {
            text += "w" + std::to_string(rng.index(30)) + " ";
        }
        docs.push_back(doc("d" + std::to_string(i), text));
    }
    auto run_once = [&](const std::filesystem::path& out) {
        auto index = LexicalIndex::build(docs, FieldSpec::Joint);
        std::vector<RankedList> lists;
        for (int q = 0; q < 5; ++q) {
            auto l = index.search(QueryRecord{"q" + std::to_string(q),
                                              "w" + std::to_string(q) + " w" +
                                                  std::to_string(q + 10)},
                                  20);
            if (!l.entries.empty()) lists.push_back(std::move(l));
        }
        io::write_run(lists, out);
    };
    run_once(dir.path() / "r1");
    run_once(dir.path() / "r2");
    std::ifstream a(dir.path() / "r1"), b(dir.path() / "r2");
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK_FALSE(sa.empty());
}
