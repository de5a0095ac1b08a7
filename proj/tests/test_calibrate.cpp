#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "oracles.hpp"
#include "rankfuse/calibrate.hpp"

using namespace rankfuse;
using testing_helpers::TestRng;

namespace {

FrameEmbeddings video(std::string id, std::uint32_t dim, std::vector<std::vector<float>> frames) {
    FrameEmbeddings fe;
    fe.doc_id = std::move(id);
    fe.dim = dim;
    for (const auto& f : frames) fe.vectors.insert(fe.vectors.end(), f.begin(), f.end());
    return fe;
}

}  // namespace

TEST_CASE("probe self-similarity and orthogonality", "[calibrate]") {
    std::vector<float> probe = {1, 0, 0, 0};
    std::vector<float> ortho = {0, 1, 0, 0};

    auto index = dense::DenseIndex::build({video("self", 4, {probe})});
    auto raw = calib::calibration_scores(index, probe);
    CHECK(raw.at("self") == Catch::Approx(1.0).margin(1e-5));

    auto pair_index = dense::DenseIndex::build(
        {video("parallel", 4, {probe}), video("orthogonal", 4, {ortho})});
    auto pair_raw = calib::calibration_scores(pair_index, probe);
    CHECK(pair_raw.at("parallel") == Catch::Approx(1.0).margin(1e-5));
    CHECK(pair_raw.at("orthogonal") == Catch::Approx(0.0).margin(1e-5));
}

TEST_CASE("calibration scores equal dense search scores for the probe", "[calibrate][oracle]") {
    TestRng rng(51);
    std::vector<FrameEmbeddings> store;
    for (int v = 0; v < 10; ++v) {
        std::vector<std::vector<float>> frames;
        for (std::size_t f = 0; f < 1 + rng.index(4); ++f) {
            frames.push_back(testing_helpers::random_unit_vector(rng, 16));
        }
        store.push_back(video("v" + std::to_string(v), 16, frames));
    }
    auto index = dense::DenseIndex::build(store);
    auto probe = testing_helpers::random_unit_vector(rng, 16);

    auto raw = calib::calibration_scores(index, probe);
    auto search = index.search(probe, "probe", 10);
    REQUIRE(raw.size() == 10);           // covers every video
    REQUIRE(search.entries.size() == 10);
    for (const auto& e : search.entries) {
        CHECK(raw.at(e.doc_id) == e.score);
    }
}

TEST_CASE("minmax endpoints and interpolation", "[calibrate]") {
    calib::AlphaParams minmax;

    auto two = calib::scores_to_alphas({{"a", 0.2}, {"b", 0.8}}, minmax);
    CHECK(two.alpha_for("a") == 0.0);
    CHECK(two.alpha_for("b") == 1.0);

    auto degenerate = calib::scores_to_alphas({{"a", 0.5}, {"b", 0.5}}, minmax);
    CHECK(degenerate.alpha_for("a") == 0.5);
    CHECK(degenerate.alpha_for("b") == 0.5);
    CHECK(degenerate.default_alpha == 0.5);

    auto three = calib::scores_to_alphas({{"a", 0.1}, {"b", 0.4}, {"c", 0.7}}, minmax);
    CHECK(three.alpha_for("a") == Catch::Approx(0.0));
    CHECK(three.alpha_for("b") == Catch::Approx(0.5));
    CHECK(three.alpha_for("c") == Catch::Approx(1.0));
}

TEST_CASE("fixed mode assigns the constant everywhere", "[calibrate]") {
    calib::AlphaParams fixed{calib::AlphaMode::Fixed, 0.3};
    auto table = calib::scores_to_alphas({{"a", 0.1}, {"b", 0.9}}, fixed);
    CHECK(table.alpha_for("a") == 0.3);
    CHECK(table.alpha_for("b") == 0.3);
}

TEST_CASE("alphas stay in range and are affine-invariant", "[calibrate][property]") {
    TestRng rng(52);
    calib::AlphaParams minmax;
    for (int trial = 0; trial < 25; ++trial) {
        std::map<std::string, double> raw;
        const std::size_t n = 2 + rng.index(20);
        for (std::size_t i = 0; i < n; ++i) {
            raw["v" + std::to_string(i)] = rng.uniform(-2.0, 2.0);
        }
        auto base = calib::scores_to_alphas(raw, minmax);
        for (const auto& [doc, alpha] : base.alphas) {
            CHECK(alpha >= 0.0);
            CHECK(alpha <= 1.0);
        }

        // positive affine transform leaves minmax alphas unchanged
        const double u = rng.uniform(0.1, 5.0);
        const double v = rng.uniform(-3.0, 3.0);
        std::map<std::string, double> transformed;
        for (const auto& [doc, s] : raw) transformed[doc] = u * s + v;
        auto shifted = calib::scores_to_alphas(transformed, minmax);
        for (const auto& [doc, alpha] : base.alphas) {
            CHECK(shifted.alpha_for(doc) == Catch::Approx(alpha).margin(1e-9));
        }

        // monotone: higher raw score never lowers alpha
        std::vector<std::pair<double, double>> pairs;
        for (const auto& [doc, s] : raw) pairs.emplace_back(s, base.alpha_for(doc));
        std::sort(pairs.begin(), pairs.end());
        for (std::size_t i = 1; i < pairs.size(); ++i) {
            CHECK(pairs[i].second >= pairs[i - 1].second);
        }
    }
}

TEST_CASE("non-finite raw scores are rejected", "[calibrate]") {
    calib::AlphaParams minmax;
    CHECK_THROWS_AS(calib::scores_to_alphas({{"a", std::nan("")}}, minmax), ValidationError);
    CHECK_THROWS_AS(calib::scores_to_alphas({}, minmax), ValidationError);
}
