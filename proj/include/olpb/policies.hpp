#pragma once

#include <cstdint>
#include <vector>

#include "olpb/dual_solver.hpp"
#include "olpb/market.hpp"

namespace olpb {

// Equal-length batch schedule over a count or time horizon.
struct BatchSchedule {
    double horizon = 0.0; // n (count) or T (time)
    int K = 0;
    double B = 0.0;

    double cut(int k) const { return k == K ? horizon : k * B; } // t_k

    static BatchSchedule for_count(std::size_t n, int K);
    static BatchSchedule for_time(double T, int K);
};

// Full decision trace of one policy run on one stream. Decisions are 0/1
// except in the last batch, where the offline allocation may carry up to m
// fractional components (the LP optimum's vertex structure); the fractional
// fill is what exhausts the remaining budget instead of stranding it.
struct TrialOutcome {
    std::vector<double> decisions; // x_j in [0,1] per customer, arrival order
    double online_reward = 0.0;
    std::vector<DualPrice> batch_prices; // p_1..p_K
    std::vector<double> leftover;        // remaining budget, m components
    long clamp_events = 0;               // defensive last-batch capacity rejections
    std::vector<double> rate_estimates;  // lambda_hat_k, poisson policies only
};

// Single resource, known customer count, N(t) = floor(t). Delays decisions in
// the first and last batch only; middle batches decide per customer using the
// price learned from all earlier customers and the remaining average resource.
TrialOutcome run_alg1(const Stream& stream, double b0, int K);

// Multi-resource variant: vector prices from the packing LP's duals, first
// batch priced from historical data of size n/K.
TrialOutcome run_alg2(const Stream& stream, const SampleSet& history,
                      const std::vector<double>& b0, int K);

// Poisson arrivals, unknown rate. Prices are box-constrained to
// [0, r_bar/d_lower]; arrival rate estimated as (N(t)+1)/t.
TrialOutcome run_alg3(const Stream& stream, double b0, double T, int K,
                      const MarketBounds& bounds);

// Known-rate variant: lambda_hat_k = rate, and middle-batch prices include the
// current batch's customers (their decisions are delayed to the batch end).
TrialOutcome run_alg3_known_rate(const Stream& stream, double b0, double T, int K,
                                 double rate, const MarketBounds& bounds);

// Impatience-aware variant of run_alg3. First-batch acceptance requires
// V_j + W_j > t_1 (expired customers still feed p_1); the last-batch dual and
// acceptances are restricted to customers with V_j + W_j > T.
TrialOutcome run_alg4(const Stream& stream, double b0, double T, int K,
                      const MarketBounds& bounds);

// Per-customer baseline: reprice from all past customers and the remaining
// average resource before every decision.
TrialOutcome run_ahdla_baseline(const Stream& stream, double b0);

// Decision trace CSV: index,decision,reward,a_1..a_m
std::string trial_to_csv(const Stream& stream, const TrialOutcome& outcome);

// Recompute the budget walk from the trace; used by the replay invariant.
std::vector<double> replay_budget(const Stream& stream, const TrialOutcome& outcome,
                                  const std::vector<double>& b0);

} // namespace olpb
