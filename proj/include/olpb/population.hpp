#pragma once

#include <stdexcept>

#include "olpb/dual_solver.hpp"
#include "olpb/market.hpp"

namespace olpb {

class UnsupportedSpecError : public std::invalid_argument {
public:
    explicit UnsupportedSpecError(const std::string& what) : std::invalid_argument(what) {}
};

// Minimizer of d*p + E[(r - a*p)^+] over p >= 0 for the built-in analytic
// families (independent uniform / point-mass laws). Bisection on the monotone
// derivative d - E[a 1{r > a p}], expectations by adaptive quadrature to 1e-10
// absolute; the returned price is accurate to 1e-8. Non-unique minimizers
// resolve to the largest one, matching the sample solver's convention.
DualPrice population_dual(const MarketSpec& spec, double d);

} // namespace olpb
