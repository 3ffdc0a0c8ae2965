#pragma once

#include <cstdint>
#include <cmath>

namespace olpb {

// Counter-based RNG: Philox-4x32-10 keyed by a 64-bit per-(seed, stream,
// substream) key derived with SplitMix64. Output i depends only on
// (seed, stream, substream, i), so draws are reproducible and independent of
// thread count, platform, and evaluation order.
//
// Substream ids used by the generators:
//   0 = arrivals, 1 = marks, 2 = patience, 3 = history.

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

struct Philox4x32 {
    uint32_t k0, k1;

    explicit Philox4x32(uint64_t key)
        : k0(static_cast<uint32_t>(key)), k1(static_cast<uint32_t>(key >> 32)) {}

    // One 128-bit block per 64-bit counter value.
    void block(uint64_t ctr, uint32_t out[4]) const {
        uint32_t c0 = static_cast<uint32_t>(ctr);
        uint32_t c1 = static_cast<uint32_t>(ctr >> 32);
        uint32_t c2 = 0, c3 = 0;
        uint32_t key0 = k0, key1 = k1;
        for (int round = 0; round < 10; ++round) {
            const uint64_t m0 = 0xD2511F53ull * c0;
            const uint64_t m1 = 0xCD9E8D57ull * c2;
            const uint32_t hi0 = static_cast<uint32_t>(m0 >> 32);
            const uint32_t lo0 = static_cast<uint32_t>(m0);
            const uint32_t hi1 = static_cast<uint32_t>(m1 >> 32);
            const uint32_t lo1 = static_cast<uint32_t>(m1);
            c0 = hi1 ^ c1 ^ key0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ key1;
            c3 = lo0;
            key0 += 0x9E3779B9u;
            key1 += 0xBB67AE85u;
        }
        out[0] = c0;
        out[1] = c1;
        out[2] = c2;
        out[3] = c3;
    }
};

} // namespace detail

// Identifies one logical random stream: a trial (stream) within a master seed.
struct RngKey {
    uint64_t seed = 0;
    uint64_t stream = 0;
};

enum class Substream : uint64_t {
    arrivals = 0,
    marks = 1,
    patience = 2,
    history = 3,
};

// Sequential view over one (key, substream) sequence. Two doubles per Philox
// block; counter increments give random access if ever needed.
class RngStream {
public:
    RngStream(RngKey key, Substream sub)
        : engine_(subkey(key, sub)), counter_(0), have_spare_(false), spare_(0) {}

    // Uniform on [0, 1) with 53-bit mantissa.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Inverse-CDF exponential; log(1-u) is safe since u < 1.
    double exponential(double rate) {
        return -std::log1p(-uniform01()) / rate;
    }

    uint64_t next_u64() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        uint32_t w[4];
        engine_.block(counter_++, w);
        spare_ = (static_cast<uint64_t>(w[2]) << 32) | w[3];
        have_spare_ = true;
        return (static_cast<uint64_t>(w[0]) << 32) | w[1];
    }

private:
    static uint64_t subkey(RngKey key, Substream sub) {
        uint64_t k = detail::splitmix64(key.seed);
        k = detail::splitmix64(k ^ key.stream);
        k = detail::splitmix64(k ^ static_cast<uint64_t>(sub));
        return k;
    }

    detail::Philox4x32 engine_;
    uint64_t counter_;
    bool have_spare_;
    uint64_t spare_;
};

} // namespace olpb
