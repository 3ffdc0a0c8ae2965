#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "olpb/rng.hpp"
#include "test_util.hpp"

using namespace olpb;

TEST_CASE("philox 4x32-10 known-answer vector") {
    // Counter 0, key 0 (Random123 reference vector).
    detail::Philox4x32 engine(0);
    uint32_t out[4];
    engine.block(0, out);
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
}

TEST_CASE("streams are deterministic in (seed, stream, substream)") {
    RngStream a({42, 7}, Substream::marks);
    RngStream b({42, 7}, Substream::marks);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different substreams and streams decorrelate") {
    const std::size_t n = 100000;
    std::vector<double> marks(n), arrivals(n), other_stream(n);
    RngStream m({42, 7}, Substream::marks);
    RngStream a({42, 7}, Substream::arrivals);
    RngStream o({42, 8}, Substream::marks);
    for (std::size_t i = 0; i < n; ++i) {
        marks[i] = m.uniform01();
        arrivals[i] = a.uniform01();
        other_stream[i] = o.uniform01();
    }
    CHECK(std::fabs(testutil::correlation(marks, arrivals)) < 0.01);
    CHECK(std::fabs(testutil::correlation(marks, other_stream)) < 0.01);
}

TEST_CASE("uniform01 has the right first moments") {
    RngStream rng({1, 0}, Substream::marks);
    const std::size_t n = 200000;
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform01();
    CHECK(testutil::mean(v) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(testutil::variance(v) == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("exponential matches its cdf") {
    RngStream rng({1, 1}, Substream::arrivals);
    const std::size_t n = 100000;
    std::vector<double> u(n);
    for (auto& x : u) x = 1.0 - std::exp(-2.0 * rng.exponential(2.0)); // cdf transform
    CHECK(testutil::ks_pvalue_uniform01(u) > 0.01);
}
