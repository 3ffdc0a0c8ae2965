#include "olpb/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace olpb {

double dual_objective(const SampleSet& samples, const std::vector<double>& d,
                      const std::vector<double>& p) {
    const int m = samples.m;
    if (static_cast<int>(d.size()) != m || static_cast<int>(p.size()) != m)
        throw std::invalid_argument("dual_objective: dimension mismatch");
    if (samples.empty()) throw std::invalid_argument("dual_objective: empty sample set");
    double dp = 0.0;
    for (int i = 0; i < m; ++i) dp += d[i] * p[i];
    double plus = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        double ap = 0.0;
        const double* a = samples.row(j);
        for (int i = 0; i < m; ++i) ap += a[i] * p[i];
        plus += std::max(0.0, samples.rewards[j] - ap);
    }
    return dp + plus / static_cast<double>(samples.size());
}

DualPrice solve_dual_single(const SampleSet& samples, double d,
                            std::optional<double> p_max) {
    if (samples.m != 1)
        throw std::invalid_argument("solve_dual_single: requires m == 1 samples");
    if (d < 0.0) throw std::invalid_argument("solve_dual_single: d must be nonnegative");
    if (p_max && !(*p_max > 0.0))
        throw std::invalid_argument("solve_dual_single: p_max must be positive");

    DualPrice out;
    out.price = {0.0};
    if (samples.empty()) {
        out.degenerate = true;
        out.objective = 0.0;
        return out;
    }

    const std::size_t n = samples.size();
    for (std::size_t j = 0; j < n; ++j)
        if (!(samples.consumption[j] > 0.0))
            throw std::invalid_argument("solve_dual_single: consumption must be positive");

    const double target = static_cast<double>(n) * d;
    double total = std::accumulate(samples.consumption.begin(), samples.consumption.end(), 0.0);
    double price = 0.0;
    if (total > target) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return samples.rewards[x] / samples.consumption[x] >
                   samples.rewards[y] / samples.consumption[y];
        });
        double cum = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            cum += samples.consumption[order[q]];
            if (cum >= target) {
                price = samples.rewards[order[q]] / samples.consumption[order[q]];
                out.active_breakpoint = order[q];
                break;
            }
        }
    }
    if (p_max && price > *p_max) {
        price = *p_max;
        out.active_breakpoint.reset();
    }
    out.price[0] = price;
    double plus = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        plus += std::max(0.0, samples.rewards[j] - samples.consumption[j] * price);
    out.objective = d * price + plus / static_cast<double>(n);
    return out;
}

PrefixDualPricer::PrefixDualPricer(const std::vector<double>& rewards,
                                   const std::vector<double>& consumption) {
    if (rewards.size() != consumption.size())
        throw std::invalid_argument("PrefixDualPricer: rewards/consumption size mismatch");
    const std::size_t n = rewards.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> ratio(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(consumption[j] > 0.0))
            throw std::invalid_argument("PrefixDualPricer: consumption must be positive");
        ratio[j] = rewards[j] / consumption[j];
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return ratio[x] > ratio[y]; });
    by_rank_.resize(n);
    rank_of_.resize(n);
    arrival_of_rank_.resize(n);
    for (std::size_t rank = 0; rank < n; ++rank) {
        const std::size_t j = order[rank];
        by_rank_[rank] = {ratio[j], rewards[j], consumption[j]};
        rank_of_[j] = rank;
        arrival_of_rank_[rank] = j;
    }
    tree_a_.assign(n + 1, 0.0);
    tree_r_.assign(n + 1, 0.0);
    inserted_.assign(n, 0);
}

PrefixDualPricer::PrefixDualPricer(const Stream& stream)
    : PrefixDualPricer(stream.rewards,
                       (stream.m == 1)
                           ? stream.consumption
                           : throw std::invalid_argument("PrefixDualPricer: requires m == 1")) {}

void PrefixDualPricer::push() {
    if (pushed_ >= rank_of_.size()) throw std::out_of_range("PrefixDualPricer: push past end");
    const std::size_t rank = rank_of_[pushed_];
    const Entry& e = by_rank_[rank];
    for (std::size_t i = rank + 1; i < tree_a_.size(); i += i & (~i + 1)) {
        tree_a_[i] += e.consumption;
        tree_r_[i] += e.reward;
    }
    inserted_[rank] = 1;
    total_a_ += e.consumption;
    ++pushed_;
}

void PrefixDualPricer::push_to(std::size_t count) {
    while (pushed_ < count) push();
}

double PrefixDualPricer::fenwick_a(std::size_t ranks) const {
    double s = 0.0;
    for (std::size_t i = ranks; i > 0; i -= i & (~i + 1)) s += tree_a_[i];
    return s;
}

double PrefixDualPricer::fenwick_r(std::size_t ranks) const {
    double s = 0.0;
    for (std::size_t i = ranks; i > 0; i -= i & (~i + 1)) s += tree_r_[i];
    return s;
}

DualPrice PrefixDualPricer::solve(double d, std::optional<double> p_max) const {
    if (d < 0.0) throw std::invalid_argument("PrefixDualPricer: d must be nonnegative");
    DualPrice out;
    out.price = {0.0};
    if (pushed_ == 0) {
        out.degenerate = true;
        out.objective = 0.0;
        return out;
    }
    const double n = static_cast<double>(pushed_);
    const double target = n * d;
    double price = 0.0;
    if (total_a_ > target) {
        // Smallest rank prefix whose inserted consumption reaches the target;
        // non-inserted ranks contribute zero, so the walk lands on an inserted one.
        std::size_t pos = 0;
        double acc = 0.0;
        std::size_t step = 1;
        while ((step << 1) <= by_rank_.size()) step <<= 1;
        for (; step > 0; step >>= 1) {
            const std::size_t nxt = pos + step;
            if (nxt < tree_a_.size() && acc + tree_a_[nxt] < target) {
                pos = nxt;
                acc += tree_a_[nxt];
            }
        }
        // pos = count of ranks with cumulative < target; crossing rank is pos.
        price = by_rank_[pos].ratio;
        out.active_breakpoint = arrival_of_rank_[pos];
    }
    if (p_max && price > *p_max) {
        price = *p_max;
        out.active_breakpoint.reset();
    }
    out.price[0] = price;

    // Objective: exact Fenwick prefix over ratios strictly above the price,
    // plus explicit plus-parts for ratio ties at the price.
    const auto boundary = std::lower_bound(
        by_rank_.begin(), by_rank_.end(), price,
        [](const Entry& e, double v) { return e.ratio > v; });
    const std::size_t nb = boundary - by_rank_.begin();
    double plus = fenwick_r(nb) - price * fenwick_a(nb);
    for (std::size_t k = nb; k < by_rank_.size() && by_rank_[k].ratio == price; ++k) {
        if (inserted_[k])
            plus += std::max(0.0, by_rank_[k].reward - by_rank_[k].consumption * price);
    }
    out.objective = d * price + plus / n;
    return out;
}

} // namespace olpb
