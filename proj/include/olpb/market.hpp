#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "olpb/rng.hpp"

namespace olpb {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class DistKind { uniform, exponential, deterministic };

// Distribution descriptor. Uniform(lo, hi) with lo == hi degenerates to a
// point mass; exponential(rate); deterministic(value) allows +inf.
struct Distribution {
    DistKind kind = DistKind::uniform;
    double a = 0.0; // uniform lo | exponential rate | deterministic value
    double b = 0.0; // uniform hi

    static Distribution Uniform(double lo, double hi) { return {DistKind::uniform, lo, hi}; }
    static Distribution Exponential(double rate) { return {DistKind::exponential, rate, 0.0}; }
    static Distribution Deterministic(double v) { return {DistKind::deterministic, v, 0.0}; }

    double sample(RngStream& rng) const;
    double mean() const;
    double cdf(double x) const;
    double support_lo() const;
    double support_hi() const;
    std::string describe() const;
};

struct MarketBounds {
    double r_bar = 0.0;   // reward upper bound
    double a_bar = 0.0;   // consumption upper bound (per coordinate)
    double a_lower = 0.0; // consumption lower bound, must be > 0
    double d_lower = 0.0; // admissible initial average resource, lower
    double d_upper = 0.0; // admissible initial average resource, upper
};

// Generative model for one market: i.i.d. (reward, consumption) pairs with
// independent coordinates, optional impatience law, and the support bounds the
// algorithms treat as known constants.
struct MarketSpec {
    int m = 1;
    Distribution reward_law = Distribution::Uniform(1.0, 19.0);
    Distribution consumption_law = Distribution::Uniform(1.0, 19.0); // per coordinate, i.i.d.
    MarketBounds bounds{19.0, 19.0, 1.0, 1.0, 10.0};
    std::optional<Distribution> impatience_law;

    // Throws std::invalid_argument when laws violate the bounds or the bounds
    // themselves are inconsistent.
    void validate() const;
    // Additionally checks d_lower < d0_i < d_upper for a configured initial
    // average resource.
    void validate_initial_average(const std::vector<double>& d0) const;

    static MarketSpec uniform_1_19(int m);
};

// Ordered (reward, consumption) samples; arrival order is preserved.
struct SampleSet {
    int m = 1;
    std::vector<double> rewards;     // size n
    std::vector<double> consumption; // size n*m, row-major

    std::size_t size() const { return rewards.size(); }
    bool empty() const { return rewards.empty(); }
    const double* row(std::size_t j) const { return consumption.data() + j * m; }
    void push_back(double r, const double* a) {
        rewards.push_back(r);
        consumption.insert(consumption.end(), a, a + m);
    }
};

enum class ArrivalKind { deterministic_unit, poisson };

struct Customer {
    double reward = 0.0;
    std::vector<double> consumption;
    double arrival_time = 0.0;
    double patience = kInf;
};

// One realized customer stream. Stored as parallel arrays; hot loops index the
// arrays directly, Customer is a convenience view.
struct Stream {
    int m = 1;
    ArrivalKind kind = ArrivalKind::deterministic_unit;
    double horizon = 0.0; // T for poisson, n for deterministic-unit
    double rate = 0.0;    // lambda, poisson only
    std::vector<double> rewards;
    std::vector<double> consumption; // n*m row-major
    std::vector<double> arrival_times;
    std::vector<double> patience; // +inf until attach_impatience

    std::size_t size() const { return rewards.size(); }
    const double* row(std::size_t j) const { return consumption.data() + j * m; }
    Customer customer(std::size_t j) const;

    // Number of arrivals in [0, t]. Arrival times are strictly increasing.
    std::size_t arrivals_by(double t) const;

    SampleSet samples(std::size_t first, std::size_t last) const; // [first, last)
};

// n customers, customer j (1-based) arriving at time j, infinite patience.
Stream sample_stream_fixed(const MarketSpec& spec, std::size_t n, RngKey key);

// Homogeneous Poisson arrivals on (0, T]; marks independent of arrival times.
Stream sample_stream_poisson(const MarketSpec& spec, double rate, double T, RngKey key);

// Copy of the stream with patience clocks drawn i.i.d. from spec.impatience_law.
Stream attach_impatience(const Stream& stream, const MarketSpec& spec, RngKey key);

// count i.i.d. draws from the marks law, on the dedicated history substream.
SampleSet sample_history(const MarketSpec& spec, std::size_t count, RngKey key);

// CSV layout: index,arrival_time,patience,reward,a_1..a_m
std::string stream_to_csv(const Stream& stream);
Stream stream_from_csv(const std::string& csv, ArrivalKind kind, double horizon, double rate = 0.0);

} // namespace olpb
