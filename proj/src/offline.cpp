#include "olpb/offline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "olpb/lp.hpp"

namespace olpb {

BenchmarkValue offline_optimum(const SampleSet& samples, const std::vector<double>& b0) {
    if (static_cast<int>(b0.size()) != samples.m)
        throw std::invalid_argument("offline_optimum: budget dimension mismatch");
    BenchmarkValue out;
    out.method = samples.m == 1 ? BenchmarkValue::Method::single_resource_pwl
                                : BenchmarkValue::Method::simplex;
    if (samples.empty()) {
        out.dual.price.assign(samples.m, 0.0);
        out.dual.degenerate = true;
        return out;
    }
    const double n = static_cast<double>(samples.size());
    if (samples.m == 1) {
        out.dual = solve_dual_single(samples, b0[0] / n);
        const double p = out.dual.scalar();
        double plus = 0.0, strict_mass = 0.0, strict_used = 0.0;
        for (std::size_t j = 0; j < samples.size(); ++j) {
            const double gap = samples.rewards[j] - samples.consumption[j] * p;
            if (gap > 0.0) {
                plus += gap;
                strict_mass += 1.0;
                strict_used += samples.consumption[j];
            }
        }
        out.value = b0[0] * p + plus;
        out.accepted_mass = strict_mass;
        if (out.dual.active_breakpoint) {
            const double a_bp = samples.consumption[*out.dual.active_breakpoint];
            const double room = b0[0] - strict_used;
            if (room > 0.0) out.accepted_mass += std::min(1.0, room / a_bp);
        }
    } else {
        LpSolution sol = solve_lp_bounded(samples, b0);
        out.value = sol.optimal_value;
        out.dual.price = sol.dual_prices;
        std::vector<double> d(samples.m);
        for (int i = 0; i < samples.m; ++i) d[i] = b0[i] / n;
        out.dual.objective = dual_objective(samples, d, sol.dual_prices);
        for (double x : sol.primal_values) out.accepted_mass += x;
    }
    return out;
}

BenchmarkValue offline_optimum(const Stream& stream, const std::vector<double>& b0) {
    return offline_optimum(stream.samples(0, stream.size()), b0);
}

BenchmarkValue filtered_benchmark(const Stream& stream, const std::vector<double>& b0,
                                  const BatchSchedule& schedule) {
    if (schedule.horizon != stream.horizon)
        throw std::invalid_argument("filtered_benchmark: schedule horizon does not match stream");
    if (stream.patience.size() != stream.size())
        throw std::invalid_argument("filtered_benchmark: stream carries no patience clocks");
    const double t1 = schedule.cut(1);
    const double t_last = schedule.cut(schedule.K - 1);
    const double T = schedule.horizon;
    SampleSet kept;
    kept.m = stream.m;
    for (std::size_t j = 0; j < stream.size(); ++j) {
        const double v = stream.arrival_times[j];
        const double leaves = v + stream.patience[j];
        if (v <= t1 && leaves <= t1) continue;
        if (v > t_last && leaves <= T) continue;
        kept.push_back(stream.rewards[j], stream.row(j));
    }
    return offline_optimum(kept, b0);
}

} // namespace olpb
