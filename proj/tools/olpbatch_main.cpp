// Command-line front end: table presets, config-driven simulation grids,
// batch-size selection, SVG plots, and direct dual-solver access.
//
// Exit codes: 0 success, 2 usage/config error, 3 I/O failure, 4 solver failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "olpb/config.hpp"
#include "olpb/experiments.hpp"
#include "olpb/lp.hpp"
#include "olpb/offline.hpp"
#include "olpb/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitSolver = 4;

int default_workers() {
    if (const char* env = std::getenv("OLP_BATCH_WORKERS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric OLP_BATCH_WORKERS\n";
        }
    }
    return 0;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

// Every artifact gets a manifest capturing enough to reproduce it bit-exactly.
void write_manifest(const fs::path& path, const std::string& command, const json& config,
                    const std::vector<std::string>& artifacts, double wall_seconds) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["artifacts"] = artifacts;
    manifest["wall_clock_seconds"] = wall_seconds;
    manifest["library_version"] = kVersion;
    write_file(path, manifest.dump(2) + "\n");
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int cmd_table(const std::string& preset, const std::string& scale, const std::string& out_dir,
              std::uint64_t seed, std::size_t trials, int workers) {
    const olpb::TableScale ts =
        scale == "full" ? olpb::TableScale::full : olpb::TableScale::desk;
    if (scale != "full" && scale != "desk") {
        std::cerr << "error: --scale must be desk or full\n";
        return kExitConfig;
    }
    Timer timer;
    const auto cells = olpb::table_preset(preset, ts, seed, trials, workers);
    std::vector<olpb::RegretEstimate> estimates;
    estimates.reserve(cells.size());
    for (const auto& cell : cells) {
        estimates.push_back(olpb::estimate_regret(cell));
        std::cerr << cell.fingerprint() << " -> regret " << estimates.back().mean << " (se "
                  << estimates.back().stderr_mean << ")\n";
    }
    const std::string csv = olpb::grid_to_csv(preset, cells, estimates);

    fs::create_directories(out_dir);
    const fs::path csv_path = fs::path(out_dir) / (preset + "_" + scale + ".csv");
    write_file(csv_path, csv);
    json config{{"preset", preset}, {"scale", scale},   {"seed", seed},
                {"trials", trials}, {"workers", workers}};
    write_manifest(fs::path(out_dir) / (preset + "_" + scale + ".manifest.json"),
                   "table", config, {csv_path.string()}, timer.seconds());
    std::cout << csv_path.string() << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    Timer timer;
    const olpb::SimulationConfig cfg = olpb::load_simulation_config(config_path);
    const auto cells = cfg.cells();
    std::vector<olpb::RegretEstimate> estimates;
    estimates.reserve(cells.size());
    for (const auto& cell : cells) {
        estimates.push_back(olpb::estimate_regret(cell));
        std::cerr << cell.fingerprint() << " -> regret " << estimates.back().mean << " (se "
                  << estimates.back().stderr_mean << ")\n";
    }
    const std::string csv = olpb::grid_to_csv("simulate", cells, estimates);

    fs::create_directories(out_dir);
    const fs::path csv_path = fs::path(out_dir) / "simulate.csv";
    write_file(csv_path, csv);
    std::ifstream cfg_in(config_path);
    std::ostringstream cfg_text;
    cfg_text << cfg_in.rdbuf();
    json config{{"config_file", config_path}, {"config_text", cfg_text.str()}};
    write_manifest(fs::path(out_dir) / "simulate.manifest.json", "simulate", config,
                   {csv_path.string()}, timer.seconds());
    std::cout << csv_path.string() << "\n";
    return 0;
}

int cmd_batch_size(const std::string& dist, double dist_rate, double dist_value,
                   double dist_lo, double dist_hi, double lambda, double C) {
    olpb::BatchSizeQuery query;
    if (dist == "exp" || dist == "exponential") {
        query.impatience = olpb::Distribution::Exponential(dist_rate);
    } else if (dist == "deterministic") {
        query.impatience = olpb::Distribution::Deterministic(dist_value);
    } else if (dist == "uniform") {
        query.impatience = olpb::Distribution::Uniform(dist_lo, dist_hi);
    } else {
        std::cerr << "error: --dist must be exp|deterministic|uniform\n";
        return kExitConfig;
    }
    query.lambda = lambda;
    query.C = C;
    std::cout.precision(12);
    std::cout << olpb::solve_batch_size(query) << "\n";
    return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& x_col, const std::string& y_col,
             const std::string& group_col, bool log_x, const std::string& out_path) {
    const olpb::CsvTable table = olpb::load_csv(csv_path);
    const std::string svg = olpb::plot_csv(table, x_col, y_col, group_col, log_x);
    write_file(out_path, svg);
    std::cout << out_path << "\n";
    return 0;
}

int cmd_dual_solve(const std::string& samples_path, std::optional<double> d,
                   const std::vector<double>& budget, std::optional<double> p_max) {
    std::ifstream in(samples_path);
    if (!in) throw std::ios_base::failure("cannot open samples CSV: " + samples_path);
    std::ostringstream text;
    text << in.rdbuf();
    const olpb::Stream stream =
        olpb::stream_from_csv(text.str(), olpb::ArrivalKind::deterministic_unit, 0.0);
    const olpb::SampleSet samples = stream.samples(0, stream.size());
    std::cout.precision(12);
    if (d) {
        const olpb::DualPrice price = olpb::solve_dual_single(
            samples, *d, p_max ? std::optional<double>(*p_max) : std::nullopt);
        std::cout << "price " << price.scalar() << "\n";
        std::cout << "objective " << price.objective << "\n";
        if (price.degenerate) std::cout << "degenerate true\n";
    } else if (!budget.empty()) {
        const olpb::LpSolution sol = olpb::solve_lp_bounded(samples, budget);
        std::cout << "price";
        for (double p : sol.dual_prices) std::cout << " " << p;
        std::cout << "\nvalue " << sol.optimal_value << "\n";
        std::cout << "fractional " << sol.fractional_count << "\n";
    } else {
        std::cerr << "error: dual-solve needs --d or --budget\n";
        return kExitConfig;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batched online LP policies: simulation tables, batch-size selection, "
                 "and dual-price solvers"};
    app.require_subcommand(1);

    std::string preset = "table1", scale = "desk", out_dir = "out";
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    int workers = default_workers();

    auto* table = app.add_subcommand("table", "Run a preset experiment table");
    table->add_option("--preset", preset, "table1|table2|table3|table4")->required();
    table->add_option("--scale", scale, "desk|full (default desk)");
    table->add_option("--out", out_dir, "output directory (default out)");
    table->add_option("--seed", seed, "master seed (default 0)");
    table->add_option("--trials", trials, "trials per cell (default 1000)");
    table->add_option("--workers", workers, "worker threads (0 = hardware)");

    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "Run a grid from an INI config file");
    simulate->add_option("--config", config_path, "INI config file")->required();
    simulate->add_option("--out", out_dir, "output directory (default out)");

    std::string dist = "exp";
    double dist_rate = 1.0, dist_value = 0.0, dist_lo = 0.0, dist_hi = 1.0;
    double lambda = 1.0, C = 1.0;
    auto* batch = app.add_subcommand("batch-size", "Solve B*F(B) = C/lambda for B");
    batch->add_option("--dist", dist, "impatience law: exp|deterministic|uniform");
    batch->add_option("--dist-rate", dist_rate, "rate for exp (default 1)");
    batch->add_option("--dist-value", dist_value, "value for deterministic");
    batch->add_option("--dist-lo", dist_lo, "lo for uniform");
    batch->add_option("--dist-hi", dist_hi, "hi for uniform");
    batch->add_option("--rate", lambda, "arrival rate lambda")->required();
    batch->add_option("--C", C, "constant C (default 1)");

    std::string csv_path, x_col, y_col, group_col, svg_out = "plot.svg";
    bool log_x = false;
    auto* plot = app.add_subcommand("plot", "Render a line plot from a CSV column pair");
    plot->add_option("--csv", csv_path, "input CSV")->required();
    plot->add_option("--x", x_col, "x column name")->required();
    plot->add_option("--y", y_col, "y column name")->required();
    plot->add_option("--group", group_col, "optional grouping column");
    plot->add_flag("--logx", log_x, "log-scale x axis");
    plot->add_option("--out", svg_out, "output SVG path (default plot.svg)");

    std::string samples_path;
    double d_value = -1.0, p_max_value = -1.0;
    std::string budget_str;
    auto* dual = app.add_subcommand("dual-solve", "Solve the dual price for a sample CSV");
    dual->add_option("--samples", samples_path, "stream CSV (index,arrival_time,patience,reward,a_1..)")
        ->required();
    dual->add_option("--d", d_value, "average resource d (single-resource solver)");
    dual->add_option("--budget", budget_str, "comma-separated budget vector (LP solver)");
    dual->add_option("--p-max", p_max_value, "optional price box bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (table->parsed())
            return cmd_table(preset, scale, out_dir, seed, trials, workers);
        if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
        if (batch->parsed())
            return cmd_batch_size(dist, dist_rate, dist_value, dist_lo, dist_hi, lambda, C);
        if (plot->parsed())
            return cmd_plot(csv_path, x_col, y_col, group_col, log_x, svg_out);
        if (dual->parsed()) {
            std::vector<double> budget;
            if (!budget_str.empty()) {
                std::istringstream is(budget_str);
                std::string item;
                while (std::getline(is, item, ',')) budget.push_back(std::stod(item));
            }
            return cmd_dual_solve(samples_path,
                                  d_value >= 0 ? std::optional<double>(d_value) : std::nullopt,
                                  budget,
                                  p_max_value > 0 ? std::optional<double>(p_max_value)
                                                  : std::nullopt);
        }
    } catch (const olpb::SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
