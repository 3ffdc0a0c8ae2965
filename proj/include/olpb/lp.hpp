#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "olpb/market.hpp"

namespace olpb {

// Optimal solution of  max sum r_j x_j  s.t.  sum a_j x_j <= b,  0 <= x_j <= 1.
struct LpSolution {
    std::vector<double> primal_values; // x_j
    std::vector<double> dual_prices;   // multipliers of the resource rows, >= 0
    double optimal_value = 0.0;
    int fractional_count = 0; // x_j strictly inside (0,1); <= m at a vertex
    int iterations = 0;
    int pivots = 0;
};

// Raised when pivoting loses feasibility beyond tolerance or fails to
// terminate; carries iteration diagnostics in the message.
class SolverFailure : public std::runtime_error {
public:
    explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

// Bounded-variable revised simplex on the m-row packing system: partial
// Dantzig pricing over a candidate list, Bland's rule fallback for
// anti-cycling, dense basis inverse with a full refresh every 50 pivots.
LpSolution solve_lp_bounded(const SampleSet& samples, const std::vector<double>& budget);

} // namespace olpb
