#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "olpb/experiments.hpp"

namespace olpb {

// Parse failure with the 1-based line/column of the offending token.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& msg, int line, int column)
        : std::invalid_argument(msg + " (line " + std::to_string(line) + ", column " +
                                std::to_string(column) + ")"),
          line(line), column(column) {}
    int line;
    int column;
};

// Simulation grid described by a flat INI file with [market], [policy],
// [grid], [run] sections of `key = value` lines; see configs/ for examples.
struct SimulationConfig {
    PolicyKind policy = PolicyKind::alg1;
    MarketSpec spec;
    std::vector<std::size_t> n_values;
    std::vector<double> lambda_values;
    std::vector<double> T_values;
    std::vector<int> K_values;
    std::vector<double> gamma_values; // when set, K is derived per (gamma, lambda)
    double d0 = 5.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    bool use_filtered_benchmark = false;
    int workers = 0;

    // Expands the grid; throws invalid_argument naming the offending cell.
    std::vector<ExperimentCell> cells() const;
};

SimulationConfig parse_simulation_config(const std::string& text);
SimulationConfig load_simulation_config(const std::string& path);

} // namespace olpb
