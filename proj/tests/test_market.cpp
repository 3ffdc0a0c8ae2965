#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "olpb/market.hpp"
#include "test_util.hpp"

using namespace olpb;

namespace {
const MarketSpec kSpec = MarketSpec::uniform_1_19(1);
}

TEST_CASE("spec validation enforces the support bounds") {
    MarketSpec bad = kSpec;
    bad.bounds.r_bar = 10.0; // reward law reaches 19
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kSpec;
    bad.bounds.a_lower = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kSpec;
    bad.consumption_law = Distribution::Uniform(0.5, 19.0); // below a_lower = 1
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_NOTHROW(kSpec.validate());
    CHECK_NOTHROW(kSpec.validate_initial_average({5.0}));
    CHECK_THROWS_AS(kSpec.validate_initial_average({0.5}), std::invalid_argument);
}

TEST_CASE("fixed streams arrive at integer times with values in support") {
    const Stream s = sample_stream_fixed(kSpec, 3, {42, 0});
    REQUIRE(s.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(s.arrival_times[j] == double(j + 1));
        CHECK(s.rewards[j] >= 1.0);
        CHECK(s.rewards[j] <= 19.0);
        CHECK(s.consumption[j] >= 1.0);
        CHECK(s.consumption[j] <= 19.0);
        CHECK(s.patience[j] == kInf);
    }
}

TEST_CASE("identical keys reproduce identical streams") {
    const Stream a = sample_stream_fixed(kSpec, 64, {42, 3});
    const Stream b = sample_stream_fixed(kSpec, 64, {42, 3});
    CHECK(a.rewards == b.rewards);
    CHECK(a.consumption == b.consumption);
    const Stream c = sample_stream_poisson(kSpec, 10.0, 16.0, {42, 3});
    const Stream d = sample_stream_poisson(kSpec, 10.0, 16.0, {42, 3});
    CHECK(c.arrival_times == d.arrival_times);
    CHECK(c.rewards == d.rewards);
}

TEST_CASE("law of large numbers for the reward marks") {
    const std::size_t n = 1000000;
    const Stream s = sample_stream_fixed(kSpec, n, {7, 0});
    CHECK(testutil::mean(s.rewards) == doctest::Approx(10.0).epsilon(0.005));
}

TEST_CASE("poisson counts have mean and variance close to lambda T") {
    const double lambda = 10.0, T = 128.0;
    const int reps = 10000;
    std::vector<double> counts(reps);
    for (int i = 0; i < reps; ++i) {
        const Stream s =
            sample_stream_poisson(kSpec, lambda, T, {99, static_cast<uint64_t>(i)});
        counts[i] = static_cast<double>(s.size());
        if (i == 0) {
            for (std::size_t j = 1; j < s.size(); ++j)
                CHECK(s.arrival_times[j] > s.arrival_times[j - 1]);
            CHECK(s.arrival_times.back() <= T);
        }
    }
    CHECK(std::fabs(testutil::mean(counts) - 1280.0) < 15.0);
    CHECK(std::fabs(testutil::variance(counts) - 1280.0) < 60.0);
}

TEST_CASE("vanishing horizon produces an empty stream") {
    const Stream s = sample_stream_poisson(kSpec, 1.0, 1e-9, {3, 0});
    CHECK(s.size() == 0);
}

TEST_CASE("impatience attaches i.i.d. clocks with the configured law") {
    MarketSpec spec = kSpec;
    CHECK_THROWS_AS(attach_impatience(sample_stream_fixed(spec, 4, {1, 0}), spec, {1, 0}),
                    std::invalid_argument);
    spec.impatience_law = Distribution::Exponential(1.0);
    const std::size_t n = 1000000;
    const Stream s = attach_impatience(sample_stream_fixed(spec, n, {5, 0}), spec, {5, 0});
    std::size_t below = 0;
    for (double w : s.patience)
        if (w <= 1.0) ++below;
    CHECK(std::fabs(double(below) / double(n) - 0.6321) < 0.002);

    spec.impatience_law = Distribution::Deterministic(kInf);
    const Stream forever = attach_impatience(sample_stream_fixed(spec, 100, {5, 1}), spec, {5, 1});
    for (double w : forever.patience) CHECK(w == kInf);
}

TEST_CASE("first-batch arrivals are conditionally uniform on (0, B)") {
    // Poisson order-statistics property behind the impatience benchmark.
    const double B = 4.0;
    std::vector<double> scaled;
    for (uint64_t i = 0; scaled.size() < 100000; ++i) {
        const Stream s = sample_stream_poisson(kSpec, 25.0, B, {11, i});
        for (double t : s.arrival_times) scaled.push_back(t / B);
    }
    CHECK(testutil::ks_pvalue_uniform01(scaled) > 0.01);
}

TEST_CASE("thinning a poisson stream matches the slowed-down stream in law") {
    // Keep marks with an independent q-coin: inter-arrival gaps compare to a
    // q*lambda stream by a two-sample KS test.
    const double lambda = 8.0, q = 0.35, T = 400.0;
    std::vector<double> thinned_gaps, direct_gaps;
    RngStream coin({202, 0}, Substream::patience);
    for (uint64_t i = 0; i < 40; ++i) {
        const Stream s = sample_stream_poisson(kSpec, lambda, T, {13, i});
        double last = 0.0;
        for (double t : s.arrival_times) {
            if (coin.uniform01() < q) {
                thinned_gaps.push_back(t - last);
                last = t;
            }
        }
        const Stream r = sample_stream_poisson(kSpec, lambda * q, T, {14, i});
        last = 0.0;
        for (double t : r.arrival_times) {
            direct_gaps.push_back(t - last);
            last = t;
        }
    }
    CHECK(testutil::ks_pvalue_two_sample(thinned_gaps, direct_gaps) > 0.01);
}

TEST_CASE("history draws are independent of the marks stream") {
    const std::size_t n = 100000;
    const Stream s = sample_stream_fixed(kSpec, n, {77, 0});
    const SampleSet h = sample_history(kSpec, n, {77, 0});
    CHECK(std::fabs(testutil::correlation(s.rewards, h.rewards)) < 0.01);
    for (double r : h.rewards) {
        CHECK(r >= 1.0);
        CHECK(r <= 19.0);
    }
    const SampleSet single = sample_history(kSpec, 1, {77, 1});
    CHECK(single.size() == 1);
}

TEST_CASE("stream csv round-trips") {
    MarketSpec spec = MarketSpec::uniform_1_19(2);
    const Stream s = sample_stream_fixed(spec, 5, {3, 1});
    const std::string csv = stream_to_csv(s);
    const Stream back = stream_from_csv(csv, ArrivalKind::deterministic_unit, 5.0);
    CHECK(back.m == 2);
    CHECK(back.rewards == s.rewards);
    CHECK(back.consumption == s.consumption);
    CHECK(back.arrival_times == s.arrival_times);
}
