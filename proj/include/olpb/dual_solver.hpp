#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "olpb/market.hpp"

namespace olpb {

// Minimizer of the sample dual  d.p + (1/N) sum_j (r_j - a_j.p)^+  over p >= 0,
// together with the objective value it attains.
struct DualPrice {
    std::vector<double> price;
    double objective = 0.0;
    std::optional<std::size_t> active_breakpoint; // sample index, 1-D solver only
    bool degenerate = false;                      // empty sample set convention

    double scalar() const { return price.at(0); }
};

// d.p + (1/N) sum_j (r_j - a_j.p)^+ ; N = samples.size(). Throws on dimension
// mismatch or empty sample set.
double dual_objective(const SampleSet& samples, const std::vector<double>& d,
                      const std::vector<double>& p);

// Single-resource exact solver. Sorts ratios r_j/a_j descending; returns 0 when
// total consumption fits within N*d, otherwise the ratio at the first index
// where cumulative consumption crosses N*d (the largest minimizer), clamped to
// p_max. Empty sample sets return price 0 with degenerate=true.
DualPrice solve_dual_single(const SampleSet& samples, double d,
                            std::optional<double> p_max = std::nullopt);

// Incremental variant of solve_dual_single over growing prefixes of a fixed
// arrival sequence. Prices agree with solve_dual_single on the pushed prefix
// (identical construction, Fenwick prefix sums instead of a per-call sort).
class PrefixDualPricer {
public:
    PrefixDualPricer(const std::vector<double>& rewards,
                     const std::vector<double>& consumption);
    explicit PrefixDualPricer(const Stream& stream);

    std::size_t pushed() const { return pushed_; }
    void push();                      // insert next customer in arrival order
    void push_to(std::size_t count);  // insert until `count` customers are in

    DualPrice solve(double d, std::optional<double> p_max = std::nullopt) const;

private:
    struct Entry {
        double ratio;
        double reward;
        double consumption;
    };

    double fenwick_a(std::size_t ranks) const;  // sum over ranks [0, ranks)
    double fenwick_r(std::size_t ranks) const;

    std::vector<Entry> by_rank_;       // descending ratio, ties by arrival order
    std::vector<std::size_t> rank_of_; // arrival index -> rank
    std::vector<std::size_t> arrival_of_rank_;
    std::vector<double> tree_a_;       // Fenwick trees over ranks, inserted only
    std::vector<double> tree_r_;
    std::vector<char> inserted_;
    std::size_t pushed_ = 0;
    double total_a_ = 0.0;
};

} // namespace olpb
