#include "olpb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "olpb/offline.hpp"
#include "olpb/population.hpp"

namespace olpb {

std::string to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::alg1: return "alg1";
    case PolicyKind::alg2: return "alg2";
    case PolicyKind::alg3: return "alg3";
    case PolicyKind::alg3_known_rate: return "alg3_known";
    case PolicyKind::alg4: return "alg4";
    case PolicyKind::ahdla: return "ahdla";
    }
    throw std::logic_error("unknown policy kind");
}

PolicyKind policy_from_string(const std::string& name) {
    if (name == "alg1") return PolicyKind::alg1;
    if (name == "alg2") return PolicyKind::alg2;
    if (name == "alg3") return PolicyKind::alg3;
    if (name == "alg3_known" || name == "alg3_known_rate") return PolicyKind::alg3_known_rate;
    if (name == "alg4") return PolicyKind::alg4;
    if (name == "ahdla") return PolicyKind::ahdla;
    throw std::invalid_argument("unknown policy '" + name +
                                "' (expected alg1|alg2|alg3|alg3_known|alg4|ahdla)");
}

void ExperimentCell::validate() const {
    spec.validate();
    spec.validate_initial_average(std::vector<double>(spec.m, d0));
    if (trials < 1) throw std::invalid_argument(fingerprint() + ": trials must be >= 1");
    if (count_based()) {
        if (n < 1) throw std::invalid_argument(fingerprint() + ": n must be >= 1");
        if (policy != PolicyKind::ahdla) {
            if (K < 2) throw std::invalid_argument(fingerprint() + ": K must be >= 2");
            if (n % static_cast<std::size_t>(K) != 0)
                throw std::invalid_argument(fingerprint() + ": K must divide n");
        }
        if (policy == PolicyKind::alg1 || policy == PolicyKind::ahdla) {
            if (spec.m != 1)
                throw std::invalid_argument(fingerprint() + ": policy requires m == 1");
        }
    } else {
        if (!(lambda > 0.0) || !(T > 0.0))
            throw std::invalid_argument(fingerprint() + ": lambda and T must be positive");
        if (K < 2) throw std::invalid_argument(fingerprint() + ": K must be >= 2");
        if (spec.m != 1)
            throw std::invalid_argument(fingerprint() + ": poisson policies require m == 1");
        if (policy == PolicyKind::alg4 && !spec.impatience_law)
            throw std::invalid_argument(fingerprint() + ": alg4 needs an impatience law");
    }
}

std::string ExperimentCell::fingerprint() const {
    std::ostringstream os;
    os << to_string(policy) << "[m=" << spec.m;
    if (count_based())
        os << ",n=" << n;
    else
        os << ",lambda=" << lambda << ",T=" << T;
    os << ",K=" << K;
    if (gamma) os << ",gamma=" << *gamma;
    os << ",d0=" << d0 << ",trials=" << trials << ",seed=" << seed << "]";
    return os.str();
}

namespace {

struct TrialResult {
    double offline = 0.0;
    double online = 0.0;
    double min_leftover = 0.0;
    long clamps = 0;
    long degenerate = 0;
};

TrialResult run_one_trial(const ExperimentCell& cell, std::size_t trial) {
    const RngKey key{cell.seed, trial};
    TrialResult res;
    TrialOutcome outcome;
    if (cell.count_based()) {
        const Stream stream = sample_stream_fixed(cell.spec, cell.n, key);
        const std::vector<double> b0(cell.spec.m, cell.d0 * static_cast<double>(cell.n));
        switch (cell.policy) {
        case PolicyKind::alg1: outcome = run_alg1(stream, b0[0], cell.K); break;
        case PolicyKind::ahdla: outcome = run_ahdla_baseline(stream, b0[0]); break;
        case PolicyKind::alg2: {
            const SampleSet history =
                sample_history(cell.spec, cell.n / static_cast<std::size_t>(cell.K), key);
            outcome = run_alg2(stream, history, b0, cell.K);
            break;
        }
        default: throw std::logic_error("count-based cell with poisson policy");
        }
        res.offline = offline_optimum(stream, b0).value;
        res.online = outcome.online_reward;
    } else {
        Stream stream = sample_stream_poisson(cell.spec, cell.lambda, cell.T, key);
        if (cell.policy == PolicyKind::alg4)
            stream = attach_impatience(stream, cell.spec, key);
        const double b0 = cell.d0 * cell.lambda * cell.T;
        switch (cell.policy) {
        case PolicyKind::alg3:
            outcome = run_alg3(stream, b0, cell.T, cell.K, cell.spec.bounds);
            break;
        case PolicyKind::alg3_known_rate:
            outcome = run_alg3_known_rate(stream, b0, cell.T, cell.K, cell.lambda,
                                          cell.spec.bounds);
            break;
        case PolicyKind::alg4:
            outcome = run_alg4(stream, b0, cell.T, cell.K, cell.spec.bounds);
            break;
        default: throw std::logic_error("poisson cell with count-based policy");
        }
        if (cell.use_filtered_benchmark)
            res.offline =
                filtered_benchmark(stream, {b0}, BatchSchedule::for_time(cell.T, cell.K)).value;
        else
            res.offline = offline_optimum(stream, {b0}).value;
        res.online = outcome.online_reward;
    }
    res.clamps = outcome.clamp_events;
    res.min_leftover = kInf;
    for (double b : outcome.leftover) res.min_leftover = std::min(res.min_leftover, b);
    for (const DualPrice& p : outcome.batch_prices)
        if (p.degenerate) ++res.degenerate;
    return res;
}

int resolve_workers(int workers, std::size_t tasks) {
    int w = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    return static_cast<int>(std::min<std::size_t>(w, tasks));
}

// Runs fn(i) for i in [0, count) on `workers` threads; any exception is
// rethrown on the caller thread.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const int w = resolve_workers(workers, count);
    if (w <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(w);
    for (int t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += w) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

} // namespace

RegretEstimate estimate_regret(const ExperimentCell& cell, bool keep_pairs) {
    cell.validate();
    std::vector<TrialResult> results(cell.trials);
    parallel_for(cell.trials, cell.workers,
                 [&](std::size_t i) { results[i] = run_one_trial(cell, i); });

    RegretEstimate est;
    est.trials = cell.trials;
    est.fingerprint = cell.fingerprint();
    est.min_pathwise = kInf;
    est.min_leftover = kInf;
    double sum = 0.0;
    for (const TrialResult& r : results) {
        const double regret = r.offline - r.online;
        sum += regret;
        est.min_pathwise = std::min(est.min_pathwise, regret);
        est.max_violation_rel =
            std::max(est.max_violation_rel, -regret / std::max(r.offline, 1.0));
        est.min_leftover = std::min(est.min_leftover, r.min_leftover);
        est.clamp_events_total += r.clamps;
        est.degenerate_prices_total += r.degenerate;
    }
    est.mean = sum / static_cast<double>(cell.trials);
    double ss = 0.0;
    for (const TrialResult& r : results) {
        const double dev = (r.offline - r.online) - est.mean;
        ss += dev * dev;
    }
    if (cell.trials > 1)
        est.stderr_mean = std::sqrt(ss / static_cast<double>(cell.trials - 1) /
                                    static_cast<double>(cell.trials));
    if (keep_pairs) {
        est.pairs.reserve(results.size());
        for (const TrialResult& r : results) est.pairs.emplace_back(r.offline, r.online);
    }
    return est;
}

namespace {

const std::vector<int> kTableK{2, 8, 32, 64, 128};
const std::vector<int> kPoissonK{2, 8, 32, 64, 128, 256};
const std::vector<std::size_t> kTableN{1280, 6400, 32000, 64000, 128000};
const std::vector<double> kPoissonLambda{10, 50, 100, 500};
const std::vector<double> kPoissonT{128, 512, 1024};

} // namespace

std::vector<ExperimentCell> table_preset(const std::string& preset, TableScale scale,
                                         std::uint64_t seed, std::size_t trials, int workers) {
    std::vector<ExperimentCell> cells;
    auto base = [&](PolicyKind policy, int m) {
        ExperimentCell c;
        c.policy = policy;
        c.spec = MarketSpec::uniform_1_19(m);
        c.d0 = 5.0;
        c.trials = trials;
        c.seed = seed;
        c.workers = workers;
        return c;
    };
    if (preset == "table1" || preset == "table2") {
        const auto policy = preset == "table1" ? PolicyKind::alg1 : PolicyKind::alg2;
        const int m = preset == "table1" ? 1 : 4;
        const auto ns = scale == TableScale::desk
                            ? std::vector<std::size_t>{kTableN.front()}
                            : kTableN;
        for (std::size_t n : ns)
            for (int K : kTableK) {
                ExperimentCell c = base(policy, m);
                c.n = n;
                c.K = K;
                cells.push_back(c);
            }
    } else if (preset == "table3" || preset == "table4") {
        const auto policy =
            preset == "table3" ? PolicyKind::alg3 : PolicyKind::alg3_known_rate;
        std::vector<std::pair<double, double>> rows;
        if (scale == TableScale::desk) {
            rows = {{kPoissonLambda.front(), kPoissonT.front()}};
        } else {
            for (double lambda : kPoissonLambda)
                for (double T : kPoissonT) rows.emplace_back(lambda, T);
        }
        for (auto [lambda, T] : rows)
            for (int K : kPoissonK) {
                ExperimentCell c = base(policy, 1);
                c.lambda = lambda;
                c.T = T;
                c.K = K;
                cells.push_back(c);
            }
    } else {
        throw std::invalid_argument("unknown preset '" + preset +
                                    "' (expected table1|table2|table3|table4)");
    }
    return cells;
}

TableRun run_table(const std::string& preset, TableScale scale, std::uint64_t seed,
                   std::size_t trials, int workers) {
    TableRun run;
    run.cells = table_preset(preset, scale, seed, trials, workers);
    run.estimates.reserve(run.cells.size());
    for (const ExperimentCell& cell : run.cells) run.estimates.push_back(estimate_regret(cell));
    return run;
}

namespace {

std::string fmt6(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

std::string grid_to_csv(const std::string& preset, const std::vector<ExperimentCell>& cells,
                        const std::vector<RegretEstimate>& estimates) {
    if (cells.size() != estimates.size())
        throw std::invalid_argument("grid_to_csv: cells/estimates size mismatch");
    std::ostringstream os;
    os << "preset,policy,m,n_or_lambda,T,K,gamma,trials,regret_mean,regret_stderr,"
          "clamp_events_total,seed\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const ExperimentCell& c = cells[i];
        const RegretEstimate& e = estimates[i];
        os << preset << "," << to_string(c.policy) << "," << c.spec.m << ",";
        if (c.count_based())
            os << c.n << "," << c.n << ",";
        else
            os << fmt6(c.lambda) << "," << fmt6(c.T) << ",";
        os << c.K << ",";
        if (c.gamma) os << fmt6(*c.gamma);
        os << "," << e.trials << "," << fmt6(e.mean) << "," << fmt6(e.stderr_mean) << ","
           << e.clamp_events_total << "," << c.seed << "\n";
    }
    return os.str();
}

LogKFit fit_log_k(const std::vector<std::pair<int, double>>& estimates) {
    std::vector<int> distinct;
    for (const auto& [k, _] : estimates) distinct.push_back(k);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        throw std::invalid_argument("fit_log_k: need at least 3 distinct K values");
    const double n = static_cast<double>(estimates.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [k, y] : estimates) {
        sx += std::log(static_cast<double>(k));
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [k, y] : estimates) {
        const double dx = std::log(static_cast<double>(k)) - mx;
        const double dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LogKFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy < 1e-30) {
        fit.r_squared = 1.0; // constant response: the fit is exact
    } else {
        double ss_res = 0.0;
        for (const auto& [k, y] : estimates) {
            const double resid = y - (fit.intercept + fit.slope * std::log(double(k)));
            ss_res += resid * resid;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    return fit;
}

ConvergenceStudy dual_convergence_study(const MarketSpec& spec, double d,
                                        const std::vector<std::size_t>& sample_sizes,
                                        std::size_t replications, std::uint64_t seed,
                                        int workers) {
    if (sample_sizes.empty())
        throw std::invalid_argument("dual_convergence_study: empty sample size list");
    if (replications < 1)
        throw std::invalid_argument("dual_convergence_study: replications must be >= 1");
    ConvergenceStudy study;
    study.sample_sizes = sample_sizes;
    study.population_price = population_dual(spec, d).scalar();
    study.mse.resize(sample_sizes.size());
    for (std::size_t idx = 0; idx < sample_sizes.size(); ++idx) {
        const std::size_t N = sample_sizes[idx];
        std::vector<double> sq(replications);
        parallel_for(replications, workers, [&](std::size_t rep) {
            const RngKey key{seed, (static_cast<std::uint64_t>(idx) << 32) | rep};
            const SampleSet samples = sample_history(spec, N, key);
            const double p = solve_dual_single(samples, d).scalar();
            const double err = p - study.population_price;
            sq[rep] = err * err;
        });
        double sum = 0.0;
        for (double v : sq) sum += v;
        study.mse[idx] = sum / static_cast<double>(replications);
    }
    if (sample_sizes.size() >= 2) {
        double sx = 0.0, sy = 0.0;
        const double n = static_cast<double>(sample_sizes.size());
        for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
            sx += std::log(static_cast<double>(sample_sizes[i]));
            sy += std::log(std::max(study.mse[i], 1e-300));
        }
        const double mx = sx / n, my = sy / n;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
            const double dx = std::log(static_cast<double>(sample_sizes[i])) - mx;
            const double dy = std::log(std::max(study.mse[i], 1e-300)) - my;
            sxx += dx * dx;
            sxy += dx * dy;
        }
        study.slope = sxy / sxx;
    }
    return study;
}

double solve_batch_size(const BatchSizeQuery& query) {
    if (!(query.lambda > 0.0))
        throw std::invalid_argument("solve_batch_size: lambda must be positive");
    if (query.C < 0.0) throw std::invalid_argument("solve_batch_size: C must be nonnegative");
    const double target = query.C / query.lambda;
    if (target == 0.0) return 0.0;
    auto g = [&](double B) { return B * query.impatience.cdf(B); };
    double hi = 1.0;
    while (g(hi) < target) {
        hi *= 2.0;
        if (hi > 1e12)
            throw std::runtime_error("solve_batch_size: no bracket below B = 1e12");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

GammaSweepResult gamma_sweep(const std::vector<double>& gammas,
                             const std::vector<double>& lambdas, double T,
                             const MarketSpec& spec, std::size_t trials, std::uint64_t seed,
                             double d0, int workers) {
    if (!spec.impatience_law)
        throw std::invalid_argument("gamma_sweep: spec needs an impatience law");
    GammaSweepResult out;
    for (double gamma : gammas) {
        for (double lambda : lambdas) {
            int K = static_cast<int>(std::lround(T * std::pow(lambda, gamma)));
            if (K < 2) {
                std::ostringstream os;
                os << "gamma=" << gamma << ", lambda=" << lambda
                   << ": B = lambda^-gamma >= T/2; clamping to the minimum K = 2";
                out.warnings.push_back(os.str());
                K = 2;
            }
            ExperimentCell cell;
            cell.policy = PolicyKind::alg4;
            cell.spec = spec;
            cell.lambda = lambda;
            cell.T = T;
            cell.K = K;
            cell.gamma = gamma;
            cell.d0 = d0;
            cell.trials = trials;
            cell.seed = seed;
            cell.workers = workers;
            out.cells.push_back(cell);
            out.estimates.push_back(estimate_regret(cell));
        }
    }
    return out;
}

} // namespace olpb
