#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "smtjpop/population.hpp"

using namespace smtjpop;

namespace {
VariabilitySpec zero_var(double delta, double v_c) {
    VariabilitySpec v;
    v.delta_center = delta;
    v.delta_span = 0.0;
    v.v_c_mean = v_c;
    v.v_c_std = 0.0;
    return v;
}

const std::vector<double> kSenseDelta = {16.5,  8.87,  18.58, 17.92, 12.95,
                                         18.675, 11.75, 18.35, 12.14};
const std::vector<double> kSenseIc = {5e-4,   8.5e-5, 5.5e-4, 3.8e-4, 2.96e-4,
                                      5.35e-4, 3e-4,   3.6e-4, 4.1e-4};

Population sensing_bank() {
    std::vector<JunctionParams> ps(9);
    for (int i = 0; i < 9; ++i) {
        ps[i].delta = kSenseDelta[i];
        ps[i].v_c = kSenseIc[i];
        ps[i].phi0 = 1e9;
    }
    return make_population(std::move(ps), -300e-6, 300e-6);
}
}  // namespace

TEST_CASE("biases are an inclusive linspace") {
    Population p = build_population(3, -0.1, 0.1, zero_var(6.0, 0.1), RngStream(1));
    REQUIRE(p.size() == 3);
    CHECK(p.bias(0) == doctest::Approx(-0.1).epsilon(1e-14));
    CHECK(p.bias(1) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
    CHECK(p.bias(2) == doctest::Approx(0.1).epsilon(1e-14));
    // zero variability: identical junctions
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(p.params[i].delta == 6.0);
        CHECK(p.params[i].v_c == 0.1);
        CHECK(p.alive(i));
    }
    // non-decreasing biases on a bigger build
    Population big = build_population(57, -0.15, 0.15, zero_var(6.0, 0.1),
                                      RngStream(2));
    for (std::size_t i = 1; i < big.size(); ++i)
        CHECK(big.bias(i) >= big.bias(i - 1));
    CHECK(big.bias(0) == doctest::Approx(-0.15));
    CHECK(big.bias(56) == doctest::Approx(0.15));
}

TEST_CASE("build_population rejects n < 2 and bad ranges") {
    CHECK_THROWS_AS(build_population(1, -0.1, 0.1, zero_var(6, 0.1), RngStream(1)),
                    ConfigError);
    CHECK_THROWS_AS(build_population(5, 0.1, -0.1, zero_var(6, 0.1), RngStream(1)),
                    ConfigError);
}

TEST_CASE("explicit nine-junction set keeps the given parameters, spreads biases") {
    Population p = sensing_bank();
    REQUIRE(p.size() == 9);
    for (int i = 0; i < 9; ++i) {
        CHECK(p.params[i].delta == kSenseDelta[i]);
        CHECK(p.params[i].v_c == kSenseIc[i]);
    }
    CHECK(p.bias(0) == doctest::Approx(-300e-6));
    CHECK(p.bias(8) == doctest::Approx(300e-6));
    // natural rates span a few Hz to tens of kHz
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 9; ++i) {
        double r0 = natural_rate(p.params[i]);
        lo = std::min(lo, r0);
        hi = std::max(hi, r0);
    }
    CHECK(lo == doctest::Approx(3.877221).epsilon(1e-5));
    CHECK(hi == doctest::Approx(70271.29).epsilon(1e-5));
}

TEST_CASE("single-junction population is allowed and centered") {
    std::vector<JunctionParams> one(1);
    one[0].delta = 6.0;
    one[0].v_c = 0.1;
    Population p = make_population(std::move(one), -0.15, 0.15);
    REQUIRE(p.size() == 1);
    CHECK(p.bias(0) == doctest::Approx(0.0).scale(1));
    CHECK_THROWS_AS(make_population({}, -0.1, 0.1), ConfigError);
}

TEST_CASE("variability sampling obeys the law of large numbers") {
    VariabilitySpec var;
    var.delta_center = 13.78;
    var.delta_span = 9.65;
    var.v_c_mean = 0.142;
    var.v_c_std = 0.037;
    Population p = build_population(10000, -0.15, 0.15, var, RngStream(7));
    double dsum = 0.0, vsum = 0.0, dmin = 1e9, dmax = -1e9;
    for (std::size_t i = 0; i < p.size(); ++i) {
        dsum += p.params[i].delta;
        vsum += p.params[i].v_c;
        dmin = std::min(dmin, p.params[i].delta);
        dmax = std::max(dmax, p.params[i].delta);
        CHECK(p.params[i].v_c > 0.0);
    }
    CHECK(dsum / p.size() == doctest::Approx(13.78).epsilon(0.01));
    CHECK(vsum / p.size() == doctest::Approx(0.142).epsilon(0.01));
    // uniform support: center +- span/2
    CHECK(dmin >= 13.78 - 4.825);
    CHECK(dmax <= 13.78 + 4.825);
    CHECK(dmin < 13.78 - 4.5);
    CHECK(dmax > 13.78 + 4.5);
}

TEST_CASE("monte carlo window rates agree with analytic rates to 3 sigma") {
    Population p = build_population(5, -0.1, 0.1, zero_var(6.0, 0.1), RngStream(3));
    const long steps = 200000;
    const double dt = 8e-9;  // peak total escape rate * dt ~ 0.02
    RateWindow w = simulate_window(p, 0.03, steps, dt, RngStream(4));
    CHECK(w.duration == doctest::Approx(steps * dt));
    std::vector<double> rates = w.rates();
    for (std::size_t i = 0; i < p.size(); ++i) {
        double expect = analytic_rate(p.params[i], 0.03 - p.bias(i));
        double sigma = std::sqrt(2.0 * expect * w.duration) / 2.0 / w.duration;
        CHECK(std::fabs(rates[i] - expect) < 3.0 * sigma + 0.01 * expect);
    }
}

TEST_CASE("stimulus far outside every tuning range freezes the population") {
    Population p = build_population(4, -0.1, 0.1, zero_var(6.0, 0.1), RngStream(5));
    RateWindow w = simulate_window(p, 3.0, 5000, 439e-6, RngStream(6));
    // at 30 v_c the P state relaxes into AP once, then nothing moves:
    // at most half a cycle each, a rate of ~0.2 Hz against a 1.2 MHz peak
    for (double c : w.counts) CHECK(c <= 0.5);
    RateWindow w2 = simulate_window(p, 3.0, 5000, 439e-6, RngStream(7));
    for (double c : w2.counts) CHECK(c == 0.0);
}

TEST_CASE("simulate_window is independent of junction evaluation order") {
    // same seed, two populations that share junction 2's parameters;
    // per-junction substreams mean junction 2 sees identical noise
    Population a = build_population(5, -0.1, 0.1, zero_var(6.0, 0.1), RngStream(9));
    Population b = build_population(5, -0.1, 0.1, zero_var(6.0, 0.1), RngStream(9));
    kill_neurons(b, 0.4, RngStream(10));  // 2 dead junctions elsewhere
    RateWindow wa = simulate_window(a, 0.02, 20000, 1e-7, RngStream(11));
    RateWindow wb = simulate_window(b, 0.02, 20000, 1e-7, RngStream(11));
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b.alive(i)) CHECK(wa.counts[i] == wb.counts[i]);
}

TEST_CASE("sampled event count never exceeds the exact transition count") {
    Population p = build_population(6, -0.1, 0.1, zero_var(6.0, 0.1),
                                    RngStream(12));
    SampledCounts sc = sampled_event_count(p, 0.01, 40e-9, 20000, RngStream(13));
    REQUIRE(sc.sampled.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(sc.sampled[i] <= sc.exact[i]);
}

TEST_CASE("fast clock captures nearly all transitions") {
    // all three junctions centered at zero bias, running at the peak rate
    std::vector<JunctionParams> ps(3);
    for (auto& q : ps) {
        q.delta = 6.0;
        q.v_c = 0.1;
    }
    Population p = make_population(std::move(ps), -0.1, 0.1, true);
    // clock 100x faster than the total switching rate at the peak
    double clock_dt = 1.0 / (100.0 * 2.0 * 2.4788e6);
    SampledCounts sc = sampled_event_count(p, 0.0, clock_dt, 500000, RngStream(15));
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(sc.exact[i] > 1000);
        double loss = 1.0 - double(sc.sampled[i]) / double(sc.exact[i]);
        CHECK(loss >= 0.0);
        CHECK(loss < 0.05);
    }
}

TEST_CASE("one clock sample detects nothing") {
    Population p = build_population(2, -0.1, 0.1, zero_var(6.0, 0.1),
                                    RngStream(16));
    SampledCounts sc = sampled_event_count(p, 0.0, 1.0, 1, RngStream(17));
    for (auto s : sc.sampled) CHECK(s == 0);
}

TEST_CASE("frozen (dead) junction counts zero") {
    Population p = build_population(3, -0.1, 0.1, zero_var(6.0, 0.1),
                                    RngStream(18));
    p.dead[1] = 1;
    SampledCounts sc = sampled_event_count(p, 0.0, 40e-9, 5000, RngStream(19));
    CHECK(sc.sampled[1] == 0);
    CHECK(sc.exact[1] == 0);
    RateWindow w = simulate_window(p, 0.0, 1000, 439e-6, RngStream(20));
    CHECK(w.counts[1] == 0.0);
}

TEST_CASE("decode reference points") {
    std::vector<JunctionParams> ps(3);
    for (int i = 0; i < 3; ++i) {
        ps[i].delta = 6.0;
        ps[i].v_c = 0.1;
    }
    Population p = make_population(std::move(ps), -0.1, 0.1);
    CHECK(decode(p, {1.0, 1.0, 1.0}) == doctest::Approx(0.0).scale(1));
    CHECK(decode(p, {0.0, 0.0, 7.0}) == doctest::Approx(0.1));
    CHECK(decode(p, {0.0, 1.0, 3.0}) == doctest::Approx(0.075));
    // invariant under uniform positive rescaling
    CHECK(decode(p, {0.0, 5.0, 15.0}) == doctest::Approx(0.075));
    // stays within the bias hull
    RngStream rng(21);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> r = {rng.uniform(), rng.uniform(), rng.uniform()};
        double y = decode(p, r);
        CHECK(y >= -0.1);
        CHECK(y <= 0.1);
    }
    CHECK_THROWS_WITH_AS(decode(p, {0.0, 0.0, 0.0}), "population silent",
                         SimulationError);
    CHECK_THROWS_AS(decode(p, {1.0, 2.0}), ConfigError);
}

TEST_CASE("decode of a symmetric profile sits at the grid center") {
    Population p = build_population(9, -0.15, 0.15, zero_var(6.0, 0.1),
                                    RngStream(22));
    std::vector<double> rates(9);
    for (int i = 0; i < 9; ++i) rates[i] = 1.0 + std::min(i, 8 - i);
    CHECK(decode(p, rates) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("kill_neurons marks the exact count and preserves survivors") {
    Population p = build_population(100, -0.15, 0.15, zero_var(6.0, 0.1),
                                    RngStream(23));
    Population before = p;
    kill_neurons(p, 0.2, RngStream(24));
    int dead = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!p.alive(i)) {
            ++dead;
        } else {
            CHECK(p.params[i].delta == before.params[i].delta);
            CHECK(p.bias(i) == before.bias(i));
        }
    }
    CHECK(dead == 20);
    // fraction 0 is a no-op
    Population q = before;
    kill_neurons(q, 0.0, RngStream(25));
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(q.alive(i));
    // fraction 1 silences everything
    Population z = before;
    kill_neurons(z, 1.0, RngStream(26));
    RateWindow w = simulate_window(z, 0.0, 100, 439e-6, RngStream(27));
    CHECK_THROWS_WITH_AS(decode(z, w.rates()), "population silent",
                         SimulationError);
    CHECK_THROWS_AS(kill_neurons(z, 1.5, RngStream(28)), ConfigError);
}

TEST_CASE("analytic_rates matches per-junction formula and masks the dead") {
    Population p = build_population(5, -0.1, 0.1, zero_var(6.0, 0.1),
                                    RngStream(29));
    p.dead[2] = 1;
    std::vector<double> r = analytic_rates(p, 0.04);
    for (std::size_t i = 0; i < 5; ++i) {
        if (i == 2)
            CHECK(r[i] == 0.0);
        else
            CHECK(r[i] ==
                  doctest::Approx(analytic_rate(p.params[i], 0.04 - p.bias(i))));
    }
}

TEST_CASE("population mean natural rate follows sinh(sigma)/sigma") {
    // uniform barrier spread, zero stimulus; half-span sigma = 1
    VariabilitySpec var;
    var.delta_center = 10.0;
    var.delta_span = 2.0;  // delta in [9, 11], sigma = 1
    var.v_c_mean = 0.1;
    var.v_c_std = 0.0;
    Population p = build_population(100000, -0.15, 0.15, var, RngStream(30));
    double nominal = 0.5e9 * std::exp(-10.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        mean += natural_rate(p.params[i]);
    mean /= double(p.size());
    CHECK(mean / nominal == doctest::Approx(std::sinh(1.0) / 1.0).epsilon(0.02));
}
