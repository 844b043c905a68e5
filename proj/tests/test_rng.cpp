#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "smtjpop/rng.hpp"

using namespace smtjpop;

TEST_CASE("same seed reproduces the exact draw sequence") {
    RngStream a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge immediately") {
    RngStream a(1), b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
    CHECK(same == 0);
}

TEST_CASE("at() is pure and order-independent") {
    RngStream root(7);
    std::uint64_t first = root.at(3).next_u64();
    // interleave other substream work, then re-derive
    root.at(5).next_u64();
    root.at(9).at(2).next_u64();
    CHECK(root.at(3).next_u64() == first);
    // multi-index form chains single-index derivation
    CHECK(root.at(4, 6).next_u64() == root.at(4).at(6).next_u64());
    CHECK(root.at(4, 6, 8).next_u64() == root.at(4).at(6).at(8).next_u64());
}

TEST_CASE("substreams with distinct indices do not collide") {
    RngStream root(99);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t i = 0; i < 4096; ++i)
        firsts.insert(root.at(i).next_u64());
    CHECK(firsts.size() == 4096);
}

TEST_CASE("split advances: consecutive splits differ, re-derivation matches") {
    RngStream a(5), b(5);
    std::uint64_t s1 = a.split().next_u64();
    std::uint64_t s2 = a.split().next_u64();
    CHECK(s1 != s2);
    CHECK(b.split().next_u64() == s1);
    CHECK(b.split().next_u64() == s2);
}

TEST_CASE("uniform lies in [0,1) and has the right first two moments") {
    RngStream r(1234);
    const int n = 200000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sq += u * u;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("uniform(lo,hi) stays inside the interval") {
    RngStream r(8);
    for (int i = 0; i < 10000; ++i) {
        double u = r.uniform(-0.15, 0.15);
        REQUIRE(u >= -0.15);
        REQUIRE(u < 0.15);
    }
}

TEST_CASE("gaussian has mean 0, variance 1, and sane tails") {
    RngStream r(77);
    const int n = 200000;
    double sum = 0, sq = 0;
    int beyond4 = 0;
    for (int i = 0; i < n; ++i) {
        double g = r.gaussian();
        sum += g;
        sq += g * g;
        beyond4 += std::fabs(g) > 4.0;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.01);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
    // P(|g|>4) ~ 6.3e-5 -> expect ~13 of 2e5; generous band
    CHECK(beyond4 < 60);
}

TEST_CASE("gaussian(mean, sd) rescales") {
    RngStream r(3);
    const int n = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        double g = r.gaussian(0.142, 0.037);
        sum += g;
        sq += g * g;
    }
    double mean = sum / n;
    double sd = std::sqrt(sq / n - mean * mean);
    CHECK(mean == doctest::Approx(0.142).epsilon(0.005));
    CHECK(sd == doctest::Approx(0.037).epsilon(0.02));
}

TEST_CASE("bit balance of the raw stream") {
    RngStream r(2026);
    int ones = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) ones += __builtin_popcountll(r.next_u64());
    // 64*n/2 expected, sd = sqrt(64n)/2 = 400
    CHECK(std::abs(ones - 32 * n) < 5 * 400);
}
