#include "olpb/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace olpb {

double Distribution::sample(RngStream& rng) const {
    switch (kind) {
    case DistKind::uniform: return a + (b - a) * rng.uniform01();
    case DistKind::exponential: return rng.exponential(a);
    case DistKind::deterministic: return a;
    }
    throw std::logic_error("unknown distribution kind");
}

double Distribution::mean() const {
    switch (kind) {
    case DistKind::uniform: return 0.5 * (a + b);
    case DistKind::exponential: return 1.0 / a;
    case DistKind::deterministic: return a;
    }
    throw std::logic_error("unknown distribution kind");
}

double Distribution::cdf(double x) const {
    switch (kind) {
    case DistKind::uniform:
        if (a == b) return x >= a ? 1.0 : 0.0;
        return std::clamp((x - a) / (b - a), 0.0, 1.0);
    case DistKind::exponential:
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-a * x);
    case DistKind::deterministic:
        return x >= a ? 1.0 : 0.0;
    }
    throw std::logic_error("unknown distribution kind");
}

double Distribution::support_lo() const {
    switch (kind) {
    case DistKind::uniform: return a;
    case DistKind::exponential: return 0.0;
    case DistKind::deterministic: return a;
    }
    throw std::logic_error("unknown distribution kind");
}

double Distribution::support_hi() const {
    switch (kind) {
    case DistKind::uniform: return b;
    case DistKind::exponential: return kInf;
    case DistKind::deterministic: return a;
    }
    throw std::logic_error("unknown distribution kind");
}

std::string Distribution::describe() const {
    std::ostringstream os;
    switch (kind) {
    case DistKind::uniform: os << "uniform(" << a << "," << b << ")"; break;
    case DistKind::exponential: os << "exp(" << a << ")"; break;
    case DistKind::deterministic: os << "deterministic(" << a << ")"; break;
    }
    return os.str();
}

void MarketSpec::validate() const {
    if (m < 1) throw std::invalid_argument("MarketSpec: m must be >= 1");
    if (reward_law.kind == DistKind::uniform && reward_law.a > reward_law.b)
        throw std::invalid_argument("MarketSpec: reward uniform has lo > hi");
    if (consumption_law.kind == DistKind::uniform && consumption_law.a > consumption_law.b)
        throw std::invalid_argument("MarketSpec: consumption uniform has lo > hi");
    if (reward_law.support_lo() < 0.0 || reward_law.support_hi() > bounds.r_bar)
        throw std::invalid_argument("MarketSpec: reward support not within [0, r_bar]");
    if (bounds.a_lower <= 0.0)
        throw std::invalid_argument("MarketSpec: a_lower must be positive");
    if (consumption_law.support_lo() < bounds.a_lower ||
        consumption_law.support_hi() > bounds.a_bar)
        throw std::invalid_argument("MarketSpec: consumption support not within [a_lower, a_bar]");
    if (!(bounds.d_lower > 0.0 && bounds.d_upper > bounds.d_lower))
        throw std::invalid_argument("MarketSpec: need 0 < d_lower < d_upper");
}

void MarketSpec::validate_initial_average(const std::vector<double>& d0) const {
    if (static_cast<int>(d0.size()) != m)
        throw std::invalid_argument("initial average resource has wrong dimension");
    for (double di : d0) {
        if (!(bounds.d_lower < di && di < bounds.d_upper))
            throw std::invalid_argument("initial average resource outside (d_lower, d_upper)");
    }
}

MarketSpec MarketSpec::uniform_1_19(int m) {
    MarketSpec spec;
    spec.m = m;
    spec.reward_law = Distribution::Uniform(1.0, 19.0);
    spec.consumption_law = Distribution::Uniform(1.0, 19.0);
    spec.bounds = {19.0, 19.0, 1.0, 1.0, 10.0};
    return spec;
}

Customer Stream::customer(std::size_t j) const {
    Customer c;
    c.reward = rewards[j];
    c.consumption.assign(row(j), row(j) + m);
    c.arrival_time = arrival_times[j];
    c.patience = patience.empty() ? kInf : patience[j];
    return c;
}

std::size_t Stream::arrivals_by(double t) const {
    return std::upper_bound(arrival_times.begin(), arrival_times.end(), t) -
           arrival_times.begin();
}

SampleSet Stream::samples(std::size_t first, std::size_t last) const {
    SampleSet s;
    s.m = m;
    s.rewards.assign(rewards.begin() + first, rewards.begin() + last);
    s.consumption.assign(consumption.begin() + first * m, consumption.begin() + last * m);
    return s;
}

namespace {

void draw_marks(const MarketSpec& spec, std::size_t n, RngKey key, Substream sub,
                std::vector<double>& rewards, std::vector<double>& consumption) {
    RngStream rng(key, sub);
    rewards.resize(n);
    consumption.resize(n * spec.m);
    for (std::size_t j = 0; j < n; ++j) {
        rewards[j] = spec.reward_law.sample(rng);
        for (int i = 0; i < spec.m; ++i)
            consumption[j * spec.m + i] = spec.consumption_law.sample(rng);
    }
}

} // namespace

Stream sample_stream_fixed(const MarketSpec& spec, std::size_t n, RngKey key) {
    spec.validate();
    if (n < 1) throw std::invalid_argument("sample_stream_fixed: n must be >= 1");
    Stream s;
    s.m = spec.m;
    s.kind = ArrivalKind::deterministic_unit;
    s.horizon = static_cast<double>(n);
    draw_marks(spec, n, key, Substream::marks, s.rewards, s.consumption);
    s.arrival_times.resize(n);
    for (std::size_t j = 0; j < n; ++j) s.arrival_times[j] = static_cast<double>(j + 1);
    s.patience.assign(n, kInf);
    return s;
}

Stream sample_stream_poisson(const MarketSpec& spec, double rate, double T, RngKey key) {
    spec.validate();
    if (!(rate > 0.0) || !(T > 0.0))
        throw std::invalid_argument("sample_stream_poisson: rate and T must be positive");
    Stream s;
    s.m = spec.m;
    s.kind = ArrivalKind::poisson;
    s.horizon = T;
    s.rate = rate;
    RngStream arrivals(key, Substream::arrivals);
    double t = 0.0;
    while (true) {
        t += arrivals.exponential(rate);
        if (t > T) break;
        s.arrival_times.push_back(t);
    }
    draw_marks(spec, s.arrival_times.size(), key, Substream::marks, s.rewards, s.consumption);
    s.patience.assign(s.arrival_times.size(), kInf);
    return s;
}

Stream attach_impatience(const Stream& stream, const MarketSpec& spec, RngKey key) {
    if (!spec.impatience_law)
        throw std::invalid_argument("attach_impatience: spec has no impatience_law");
    Stream s = stream;
    RngStream rng(key, Substream::patience);
    s.patience.resize(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) s.patience[j] = spec.impatience_law->sample(rng);
    return s;
}

SampleSet sample_history(const MarketSpec& spec, std::size_t count, RngKey key) {
    spec.validate();
    if (count < 1) throw std::invalid_argument("sample_history: count must be >= 1");
    SampleSet s;
    s.m = spec.m;
    draw_marks(spec, count, key, Substream::history, s.rewards, s.consumption);
    return s;
}

std::string stream_to_csv(const Stream& stream) {
    std::ostringstream os;
    os.precision(17);
    os << "index,arrival_time,patience,reward";
    for (int i = 1; i <= stream.m; ++i) os << ",a_" << i;
    os << "\n";
    for (std::size_t j = 0; j < stream.size(); ++j) {
        os << j + 1 << "," << stream.arrival_times[j] << ","
           << (stream.patience.empty() ? kInf : stream.patience[j]) << ","
           << stream.rewards[j];
        for (int i = 0; i < stream.m; ++i) os << "," << stream.row(j)[i];
        os << "\n";
    }
    return os.str();
}

Stream stream_from_csv(const std::string& csv, ArrivalKind kind, double horizon, double rate) {
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("stream CSV: empty input");
    int ncols = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
    if (ncols < 5) throw std::invalid_argument("stream CSV: expected at least 5 columns");
    Stream s;
    s.m = ncols - 4;
    s.kind = kind;
    s.horizon = horizon;
    s.rate = rate;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<int>(vals.size()) != ncols)
            throw std::invalid_argument("stream CSV: ragged row");
        s.arrival_times.push_back(vals[1]);
        s.patience.push_back(vals[2]);
        s.rewards.push_back(vals[3]);
        for (int i = 0; i < s.m; ++i) s.consumption.push_back(vals[4 + i]);
    }
    return s;
}

} // namespace olpb
