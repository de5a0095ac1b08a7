#pragma once

// Shared fixture helpers for the test suites. Deterministic by construction:
// every generator takes an explicit seed.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rankfuse/types.hpp"

namespace testing_helpers {

// Same engine + derivations everywhere so fixtures are reproducible.
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }
    double normal() {
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * uniform01());
    }

private:
    std::mt19937_64 engine_;
};

inline std::vector<float> random_unit_vector(TestRng& rng, std::size_t dim) {
    std::vector<float> v(dim);
    double norm_sq = 0.0;
    for (auto& x : v) {
        x = static_cast<float>(rng.normal());
        norm_sq += static_cast<double>(x) * x;
    }
    const float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
    for (auto& x : v) x *= inv;
    return v;
}

// A canonicalized random ranked list over doc ids sampled from [0, pool).
inline rankfuse::RankedList random_ranked_list(TestRng& rng, const std::string& qid,
                                               std::size_t pool, std::size_t depth,
                                               const std::string& tag = "test") {
    std::vector<std::size_t> ids(pool);
    for (std::size_t i = 0; i < pool; ++i) ids[i] = i;
    for (std::size_t i = pool; i > 1; --i) std::swap(ids[i - 1], ids[rng.index(i)]);

    rankfuse::RankedList list;
    list.qid = qid;
    list.run_tag = tag;
    const std::size_t n = std::min(depth, pool);
    for (std::size_t i = 0; i < n; ++i) {
        list.entries.push_back(
            rankfuse::RankedEntry{"d" + std::to_string(ids[i]), 0, rng.uniform(-5.0, 5.0)});
    }
    return rankfuse::canonicalize(std::move(list));
}

// Unique scratch directory under the system temp dir; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& label) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("rankfuse_test_" + label + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace testing_helpers
