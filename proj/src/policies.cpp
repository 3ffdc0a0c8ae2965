#include "olpb/policies.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "olpb/lp.hpp"

namespace olpb {

BatchSchedule BatchSchedule::for_count(std::size_t n, int K) {
    if (K < 2) throw std::invalid_argument("BatchSchedule: K must be >= 2");
    if (n == 0 || n % static_cast<std::size_t>(K) != 0)
        throw std::invalid_argument("BatchSchedule: K must divide n");
    return {static_cast<double>(n), K, static_cast<double>(n / K)};
}

BatchSchedule BatchSchedule::for_time(double T, int K) {
    if (K < 2) throw std::invalid_argument("BatchSchedule: K must be >= 2");
    if (!(T > 0.0)) throw std::invalid_argument("BatchSchedule: T must be positive");
    return {T, K, T / K};
}

namespace {

void require_single_resource(const Stream& stream) {
    if (stream.m != 1)
        throw std::invalid_argument("policy requires a single-resource stream (m == 1)");
}

// Accept/record step shared by the single-resource policies.
inline void decide_single(const Stream& stream, std::size_t j, double price,
                          double& budget, TrialOutcome& out) {
    const double r = stream.rewards[j];
    const double a = stream.consumption[j];
    if (r > a * price && budget >= a) {
        out.decisions[j] = 1.0;
        out.online_reward += r;
        budget -= a;
    }
}

// Last-batch offline allocation restricted to `eligible` customers (empty =
// all): strict-support acceptances in arrival order under the defensive
// clamp, then the dual's breakpoint customer absorbs the remaining budget
// fractionally, mirroring the <= 1 fractional component of the batch LP's
// vertex optimum.
void last_batch_offline(const Stream& stream, std::size_t first, std::size_t last,
                        const std::vector<char>& eligible, std::optional<double> p_max,
                        double& b, TrialOutcome& out) {
    SampleSet samples;
    samples.m = 1;
    std::vector<std::size_t> sample_to_stream;
    for (std::size_t j = first; j < last; ++j) {
        if (!eligible.empty() && !eligible[j - first]) continue;
        samples.push_back(stream.rewards[j], &stream.consumption[j]);
        sample_to_stream.push_back(j);
    }
    const double d = samples.empty() ? 0.0 : b / static_cast<double>(samples.size());
    DualPrice pK = solve_dual_single(samples, d, p_max);
    for (std::size_t j = first; j < last; ++j) {
        if (!eligible.empty() && !eligible[j - first]) continue;
        const double r = stream.rewards[j];
        const double a = stream.consumption[j];
        if (r > a * pK.scalar()) {
            if (b >= a) {
                out.decisions[j] = 1.0;
                out.online_reward += r;
                b -= a;
            } else {
                ++out.clamp_events;
            }
        }
    }
    if (pK.active_breakpoint && b > 0.0) {
        const std::size_t j = sample_to_stream[*pK.active_breakpoint];
        if (out.decisions[j] == 0.0) {
            const double a = stream.consumption[j];
            if (a <= b) {
                out.decisions[j] = 1.0;
                out.online_reward += stream.rewards[j];
                b -= a;
            } else {
                const double x = b / a;
                out.decisions[j] = x;
                out.online_reward += stream.rewards[j] * x;
                b = 0.0;
            }
        }
    }
    out.batch_prices.push_back(std::move(pK));
}

} // namespace

TrialOutcome run_alg1(const Stream& stream, double b0, int K) {
    require_single_resource(stream);
    if (stream.kind != ArrivalKind::deterministic_unit)
        throw std::invalid_argument("run_alg1: requires a deterministic-unit stream");
    const std::size_t n = stream.size();
    const BatchSchedule sched = BatchSchedule::for_count(n, K);
    const std::size_t B = static_cast<std::size_t>(sched.B);

    TrialOutcome out;
    out.decisions.assign(n, 0);
    out.batch_prices.reserve(K);
    double b = b0;

    PrefixDualPricer pricer(stream);

    // Batch 1: price from the batch's own customers, initial average resource.
    pricer.push_to(B);
    DualPrice p1 = pricer.solve(b0 / static_cast<double>(n));
    for (std::size_t j = 0; j < B; ++j) decide_single(stream, j, p1.scalar(), b, out);
    out.batch_prices.push_back(std::move(p1));

    // Middle batches: remaining average resource, immediate decisions.
    for (int k = 2; k <= K - 1; ++k) {
        const std::size_t t_prev = static_cast<std::size_t>(k - 1) * B;
        const double d = b / static_cast<double>(n - t_prev);
        DualPrice pk = pricer.solve(d);
        for (std::size_t j = t_prev; j < t_prev + B; ++j)
            decide_single(stream, j, pk.scalar(), b, out);
        pricer.push_to(t_prev + B);
        out.batch_prices.push_back(std::move(pk));
    }

    // Last batch: offline allocation over its own customers and the remaining
    // budget (strict support of the dual plus the fractional vertex component).
    last_batch_offline(stream, n - B, n, {}, std::nullopt, b, out);
    out.leftover = {b};
    return out;
}

namespace {

// LP-backed batch price: duals of max r.x st sum a_j x_j <= N*d, 0<=x<=1,
// reported with the normalized dual objective.
DualPrice lp_batch_price(const SampleSet& samples, const std::vector<double>& scaled_budget,
                         const std::vector<double>& d) {
    DualPrice price;
    if (samples.empty()) {
        price.price.assign(d.size(), 0.0);
        price.degenerate = true;
        return price;
    }
    LpSolution sol = solve_lp_bounded(samples, scaled_budget);
    price.price = sol.dual_prices;
    price.objective = dual_objective(samples, d, price.price);
    return price;
}

inline bool fits(const double* a, const double* budget, int m) {
    for (int i = 0; i < m; ++i)
        if (budget[i] < a[i]) return false;
    return true;
}

inline bool above_price(double r, const double* a, const std::vector<double>& p, int m) {
    double ap = 0.0;
    for (int i = 0; i < m; ++i) ap += a[i] * p[i];
    return r > ap;
}

} // namespace

TrialOutcome run_alg2(const Stream& stream, const SampleSet& history,
                      const std::vector<double>& b0, int K) {
    const int m = stream.m;
    if (history.m != m) throw std::invalid_argument("run_alg2: history dimension mismatch");
    if (static_cast<int>(b0.size()) != m)
        throw std::invalid_argument("run_alg2: budget dimension mismatch");
    if (stream.kind != ArrivalKind::deterministic_unit)
        throw std::invalid_argument("run_alg2: requires a deterministic-unit stream");
    const std::size_t n = stream.size();
    const BatchSchedule sched = BatchSchedule::for_count(n, K);
    const std::size_t B = static_cast<std::size_t>(sched.B);
    if (history.size() != B)
        throw std::invalid_argument("run_alg2: history size must equal the batch size n/K");

    TrialOutcome out;
    out.decisions.assign(n, 0);
    out.batch_prices.reserve(K);
    std::vector<double> b = b0;

    auto decide = [&](std::size_t j, const std::vector<double>& price) {
        const double* a = stream.row(j);
        if (above_price(stream.rewards[j], a, price, m) && fits(a, b.data(), m)) {
            out.decisions[j] = 1;
            out.online_reward += stream.rewards[j];
            for (int i = 0; i < m; ++i) b[i] -= a[i];
        }
    };

    // Batch 1: price from history with the initial average resource.
    {
        std::vector<double> d(m), budget(m);
        for (int i = 0; i < m; ++i) {
            d[i] = b0[i] / static_cast<double>(n);
            budget[i] = d[i] * static_cast<double>(B);
        }
        DualPrice p1 = lp_batch_price(history, budget, d);
        for (std::size_t j = 0; j < B; ++j) decide(j, p1.price);
        out.batch_prices.push_back(std::move(p1));
    }

    for (int k = 2; k <= K - 1; ++k) {
        const std::size_t t_prev = static_cast<std::size_t>(k - 1) * B;
        const double remaining = static_cast<double>(n - t_prev);
        std::vector<double> d(m), budget(m);
        for (int i = 0; i < m; ++i) {
            d[i] = b[i] / remaining;
            budget[i] = d[i] * static_cast<double>(t_prev);
        }
        const SampleSet prefix = stream.samples(0, t_prev);
        LpSolution sol = solve_lp_bounded(prefix, budget);
        DualPrice pk;
        pk.price = sol.dual_prices;
        pk.objective = dual_objective(prefix, d, pk.price);
        for (std::size_t j = t_prev; j < t_prev + B; ++j) decide(j, pk.price);
        out.batch_prices.push_back(std::move(pk));
    }

    // Last batch: offline LP duals over its own customers with the remaining
    // budget, decisions by the strict rule under the defensive clamp. Unlike
    // the single-resource policies, the multi-resource trace stays integral:
    // the vertex optimum's fractional components are rejected, not filled.
    {
        const std::size_t t_last = n - B;
        const SampleSet last_samples = stream.samples(t_last, n);
        std::vector<double> d(m);
        for (int i = 0; i < m; ++i) d[i] = b[i] / static_cast<double>(B);
        DualPrice pK = lp_batch_price(last_samples, b, d);
        for (std::size_t j = t_last; j < n; ++j) {
            const double* a = stream.row(j);
            if (above_price(stream.rewards[j], a, pK.price, m)) {
                if (fits(a, b.data(), m)) {
                    out.decisions[j] = 1.0;
                    out.online_reward += stream.rewards[j];
                    for (int i = 0; i < m; ++i) b[i] -= a[i];
                } else {
                    ++out.clamp_events;
                }
            }
        }
        out.batch_prices.push_back(std::move(pK));
    }
    out.leftover = b;
    return out;
}

namespace {

struct PoissonRun {
    const Stream& stream;
    double T;
    int K;
    double p_max;
    std::vector<std::size_t> counts; // N(t_k) for k=0..K

    PoissonRun(const Stream& s, double T_, int K_, const MarketBounds& bounds)
        : stream(s), T(T_), K(K_) {
        if (s.m != 1) throw std::invalid_argument("poisson policies require m == 1");
        if (s.kind != ArrivalKind::poisson)
            throw std::invalid_argument("poisson policies require a poisson stream");
        if (T != s.horizon)
            throw std::invalid_argument("policy horizon does not match the stream horizon");
        if (!(bounds.r_bar > 0.0) || !(bounds.d_lower > 0.0))
            throw std::invalid_argument("poisson policies need positive r_bar and d_lower");
        const BatchSchedule sched = BatchSchedule::for_time(T, K);
        p_max = bounds.r_bar / bounds.d_lower;
        counts.resize(K + 1);
        for (int k = 0; k <= K; ++k) counts[k] = s.arrivals_by(sched.cut(k));
    }
};

} // namespace

TrialOutcome run_alg3(const Stream& stream, double b0, double T, int K,
                      const MarketBounds& bounds) {
    PoissonRun run(stream, T, K, bounds);
    const BatchSchedule sched = BatchSchedule::for_time(T, K);

    TrialOutcome out;
    out.decisions.assign(stream.size(), 0);
    out.batch_prices.reserve(K);
    out.rate_estimates.reserve(K - 1);
    double b = b0;

    PrefixDualPricer pricer(stream);

    // Batch 1: rate and price estimated from the batch's own customers.
    {
        const double t1 = sched.cut(1);
        const double lambda_hat = (static_cast<double>(run.counts[1]) + 1.0) / t1;
        out.rate_estimates.push_back(lambda_hat);
        pricer.push_to(run.counts[1]);
        DualPrice p1 = pricer.solve(b0 / (lambda_hat * T), run.p_max);
        for (std::size_t j = 0; j < run.counts[1]; ++j)
            decide_single(stream, j, p1.scalar(), b, out);
        out.batch_prices.push_back(std::move(p1));
    }

    for (int k = 2; k <= K - 1; ++k) {
        const double t_prev = sched.cut(k - 1);
        const double lambda_hat = (static_cast<double>(run.counts[k - 1]) + 1.0) / t_prev;
        out.rate_estimates.push_back(lambda_hat);
        const double d = b / (lambda_hat * (T - t_prev));
        DualPrice pk = pricer.solve(d, run.p_max);
        for (std::size_t j = run.counts[k - 1]; j < run.counts[k]; ++j)
            decide_single(stream, j, pk.scalar(), b, out);
        pricer.push_to(run.counts[k]);
        out.batch_prices.push_back(std::move(pk));
    }

    last_batch_offline(stream, run.counts[K - 1], run.counts[K], {}, run.p_max, b, out);
    out.leftover = {b};
    return out;
}

TrialOutcome run_alg3_known_rate(const Stream& stream, double b0, double T, int K,
                                 double rate, const MarketBounds& bounds) {
    if (!(rate > 0.0)) throw std::invalid_argument("run_alg3_known_rate: rate must be positive");
    PoissonRun run(stream, T, K, bounds);
    const BatchSchedule sched = BatchSchedule::for_time(T, K);

    TrialOutcome out;
    out.decisions.assign(stream.size(), 0);
    out.batch_prices.reserve(K);
    out.rate_estimates.assign(K - 1, rate);
    double b = b0;

    PrefixDualPricer pricer(stream);

    {
        pricer.push_to(run.counts[1]);
        DualPrice p1 = pricer.solve(b0 / (rate * T), run.p_max);
        for (std::size_t j = 0; j < run.counts[1]; ++j)
            decide_single(stream, j, p1.scalar(), b, out);
        out.batch_prices.push_back(std::move(p1));
    }

    // Middle batches include their own customers in the price; decisions are
    // delayed to the batch end.
    for (int k = 2; k <= K - 1; ++k) {
        const double t_prev = sched.cut(k - 1);
        const double d = b / (rate * (T - t_prev));
        pricer.push_to(run.counts[k]);
        DualPrice pk = pricer.solve(d, run.p_max);
        for (std::size_t j = run.counts[k - 1]; j < run.counts[k]; ++j)
            decide_single(stream, j, pk.scalar(), b, out);
        out.batch_prices.push_back(std::move(pk));
    }

    last_batch_offline(stream, run.counts[K - 1], run.counts[K], {}, run.p_max, b, out);
    out.leftover = {b};
    return out;
}

TrialOutcome run_alg4(const Stream& stream, double b0, double T, int K,
                      const MarketBounds& bounds) {
    if (stream.patience.size() != stream.size())
        throw std::invalid_argument("run_alg4: stream carries no patience clocks");
    PoissonRun run(stream, T, K, bounds);
    const BatchSchedule sched = BatchSchedule::for_time(T, K);

    TrialOutcome out;
    out.decisions.assign(stream.size(), 0);
    out.batch_prices.reserve(K);
    out.rate_estimates.reserve(K - 1);
    double b = b0;

    PrefixDualPricer pricer(stream);

    // Batch 1: expired customers are rejected but still price p_1.
    {
        const double t1 = sched.cut(1);
        const double lambda_hat = (static_cast<double>(run.counts[1]) + 1.0) / t1;
        out.rate_estimates.push_back(lambda_hat);
        pricer.push_to(run.counts[1]);
        DualPrice p1 = pricer.solve(b0 / (lambda_hat * T), run.p_max);
        for (std::size_t j = 0; j < run.counts[1]; ++j) {
            if (stream.arrival_times[j] + stream.patience[j] <= t1) continue;
            decide_single(stream, j, p1.scalar(), b, out);
        }
        out.batch_prices.push_back(std::move(p1));
    }

    // Middle-batch customers never wait; identical to the impatience-free run.
    for (int k = 2; k <= K - 1; ++k) {
        const double t_prev = sched.cut(k - 1);
        const double lambda_hat = (static_cast<double>(run.counts[k - 1]) + 1.0) / t_prev;
        out.rate_estimates.push_back(lambda_hat);
        const double d = b / (lambda_hat * (T - t_prev));
        DualPrice pk = pricer.solve(d, run.p_max);
        for (std::size_t j = run.counts[k - 1]; j < run.counts[k]; ++j)
            decide_single(stream, j, pk.scalar(), b, out);
        pricer.push_to(run.counts[k]);
        out.batch_prices.push_back(std::move(pk));
    }

    // Last batch: both the dual and the acceptances see only customers still
    // waiting at T.
    {
        const std::size_t first = run.counts[K - 1];
        const std::size_t last = run.counts[K];
        std::vector<char> waiting(last - first, 0);
        for (std::size_t j = first; j < last; ++j)
            waiting[j - first] = stream.arrival_times[j] + stream.patience[j] > T ? 1 : 0;
        last_batch_offline(stream, first, last, waiting, run.p_max, b, out);
    }
    out.leftover = {b};
    return out;
}

TrialOutcome run_ahdla_baseline(const Stream& stream, double b0) {
    require_single_resource(stream);
    if (stream.kind != ArrivalKind::deterministic_unit)
        throw std::invalid_argument("run_ahdla_baseline: requires a deterministic-unit stream");
    const std::size_t n = stream.size();

    TrialOutcome out;
    out.decisions.assign(n, 0);
    double b = b0;

    PrefixDualPricer pricer(stream);
    if (stream.rewards[0] > 0.0 && b >= stream.consumption[0]) {
        out.decisions[0] = 1;
        out.online_reward += stream.rewards[0];
        b -= stream.consumption[0];
    }
    pricer.push();
    for (std::size_t j = 1; j < n; ++j) {
        const double d = b / static_cast<double>(n - j);
        DualPrice p = pricer.solve(d);
        decide_single(stream, j, p.scalar(), b, out);
        pricer.push();
    }
    out.leftover = {b};
    return out;
}

std::string trial_to_csv(const Stream& stream, const TrialOutcome& outcome) {
    std::ostringstream os;
    os.precision(17);
    os << "index,decision,reward";
    for (int i = 1; i <= stream.m; ++i) os << ",a_" << i;
    os << "\n";
    for (std::size_t j = 0; j < stream.size(); ++j) {
        os << j + 1 << "," << outcome.decisions[j] << "," << stream.rewards[j];
        for (int i = 0; i < stream.m; ++i) os << "," << stream.row(j)[i];
        os << "\n";
    }
    return os.str();
}

std::vector<double> replay_budget(const Stream& stream, const TrialOutcome& outcome,
                                  const std::vector<double>& b0) {
    std::vector<double> b = b0;
    for (std::size_t j = 0; j < stream.size(); ++j) {
        const double x = outcome.decisions[j];
        if (x == 0.0) continue;
        const double* a = stream.row(j);
        for (int i = 0; i < stream.m; ++i) b[i] -= a[i] * x;
    }
    return b;
}

} // namespace olpb
