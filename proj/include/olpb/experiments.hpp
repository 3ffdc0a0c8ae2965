#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "olpb/market.hpp"
#include "olpb/policies.hpp"

namespace olpb {

enum class PolicyKind { alg1, alg2, alg3, alg3_known_rate, alg4, ahdla };

std::string to_string(PolicyKind kind);
PolicyKind policy_from_string(const std::string& name);

// One fully-resolved grid cell: policy, market, horizon, schedule, trials.
struct ExperimentCell {
    PolicyKind policy = PolicyKind::alg1;
    MarketSpec spec;
    std::size_t n = 0;          // count-based policies
    double lambda = 0.0;        // poisson policies
    double T = 0.0;
    int K = 2;
    std::optional<double> gamma; // set when K was derived from a gamma sweep
    double d0 = 5.0;             // per-resource initial average; b0 = d0 * E[#customers]
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    bool use_filtered_benchmark = false;
    int workers = 0; // 0 = hardware concurrency

    bool count_based() const {
        return policy == PolicyKind::alg1 || policy == PolicyKind::alg2 ||
               policy == PolicyKind::ahdla;
    }
    double expected_customers() const {
        return count_based() ? static_cast<double>(n) : lambda * T;
    }
    void validate() const; // throws invalid_argument naming the offending field
    std::string fingerprint() const;
};

// Aggregated Monte-Carlo regret for one cell; common random numbers pair the
// benchmark and the policy on the same stream.
struct RegretEstimate {
    double mean = 0.0;
    double stderr_mean = 0.0; // sample std / sqrt(trials)
    std::size_t trials = 0;
    double min_pathwise = 0.0;      // smallest per-trial R* - R_pi
    double max_violation_rel = 0.0; // largest (R_pi - R*) / max(R*, 1)
    double min_leftover = 0.0;      // smallest remaining budget component seen
    long clamp_events_total = 0;
    long degenerate_prices_total = 0;
    std::vector<std::pair<double, double>> pairs; // (R*, R_pi) when retained
    std::string fingerprint;
};

RegretEstimate estimate_regret(const ExperimentCell& cell, bool keep_pairs = false);

// Tables from the reference experiments. Desk scale runs only the smallest
// n or (lambda, T) row; full scale runs the whole grid.
enum class TableScale { desk, full };

struct TableRun {
    std::vector<ExperimentCell> cells;
    std::vector<RegretEstimate> estimates;
};

std::vector<ExperimentCell> table_preset(const std::string& preset, TableScale scale,
                                         std::uint64_t seed, std::size_t trials = 1000,
                                         int workers = 0);
TableRun run_table(const std::string& preset, TableScale scale, std::uint64_t seed,
                   std::size_t trials = 1000, int workers = 0);

// CSV grid layout shared by table/simulate/gamma outputs.
std::string grid_to_csv(const std::string& preset, const std::vector<ExperimentCell>& cells,
                        const std::vector<RegretEstimate>& estimates);

struct LogKFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// OLS of regret against ln K; needs >= 3 distinct K values.
LogKFit fit_log_k(const std::vector<std::pair<int, double>>& estimates);

struct ConvergenceStudy {
    std::vector<std::size_t> sample_sizes;
    std::vector<double> mse;          // mean squared price error per N
    std::optional<double> slope;      // log-log OLS slope; absent for < 2 sizes
    double population_price = 0.0;
};

ConvergenceStudy dual_convergence_study(const MarketSpec& spec, double d,
                                        const std::vector<std::size_t>& sample_sizes,
                                        std::size_t replications, std::uint64_t seed,
                                        int workers = 0);

struct BatchSizeQuery {
    Distribution impatience; // cdf F
    double lambda = 1.0;
    double C = 1.0;
};

// Root of B * F(B) = C / lambda, bracket by doubling then bisection to 1e-9.
double solve_batch_size(const BatchSizeQuery& query);

struct GammaSweepResult {
    std::vector<ExperimentCell> cells;
    std::vector<RegretEstimate> estimates;
    std::vector<std::string> warnings;
};

// Regret of the impatience policy over a (gamma, lambda) grid with B close to
// lambda^-gamma while keeping K * B = T exact.
GammaSweepResult gamma_sweep(const std::vector<double>& gammas,
                             const std::vector<double>& lambdas, double T,
                             const MarketSpec& spec, std::size_t trials,
                             std::uint64_t seed, double d0 = 5.0, int workers = 0);

} // namespace olpb
