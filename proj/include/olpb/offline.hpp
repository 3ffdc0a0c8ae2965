#pragma once

#include <vector>

#include "olpb/dual_solver.hpp"
#include "olpb/market.hpp"
#include "olpb/policies.hpp"

namespace olpb {

// Hindsight LP benchmark, evaluated through strong duality.
struct BenchmarkValue {
    enum class Method { single_resource_pwl, simplex };

    double value = 0.0;
    DualPrice dual;
    double accepted_mass = 0.0; // sum of x_j at the optimum
    Method method = Method::single_resource_pwl;
};

// Optimal value of the offline packing LP over the given samples.
BenchmarkValue offline_optimum(const SampleSet& samples, const std::vector<double>& b0);
BenchmarkValue offline_optimum(const Stream& stream, const std::vector<double>& b0);

// Impatience-filtered benchmark: first-batch customers with V+W <= t_1 and
// last-batch customers with V+W <= T are forced out; middle batches are kept.
BenchmarkValue filtered_benchmark(const Stream& stream, const std::vector<double>& b0,
                                  const BatchSchedule& schedule);

} // namespace olpb
