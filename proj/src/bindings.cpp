#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "olpb/config.hpp"
#include "olpb/experiments.hpp"
#include "olpb/lp.hpp"
#include "olpb/offline.hpp"
#include "olpb/population.hpp"
#include "olpb/svg.hpp"

namespace py = pybind11;
using namespace olpb;

namespace {

SampleSet make_sample_set(const std::vector<double>& rewards,
                          const std::vector<std::vector<double>>& consumption) {
    if (rewards.size() != consumption.size())
        throw std::invalid_argument("rewards and consumption must have equal length");
    SampleSet s;
    s.m = consumption.empty() ? 1 : static_cast<int>(consumption.front().size());
    for (std::size_t j = 0; j < rewards.size(); ++j) {
        if (static_cast<int>(consumption[j].size()) != s.m)
            throw std::invalid_argument("ragged consumption rows");
        s.push_back(rewards[j], consumption[j].data());
    }
    return s;
}

} // namespace

PYBIND11_MODULE(_olpb, mod) {
    mod.doc() = "Batched online linear programming: dual-price policies, offline "
                "benchmarks, and Monte-Carlo regret estimation";

    py::class_<Distribution>(mod, "Distribution")
        .def_static("uniform", &Distribution::Uniform, py::arg("lo"), py::arg("hi"))
        .def_static("exponential", &Distribution::Exponential, py::arg("rate"))
        .def_static("deterministic", &Distribution::Deterministic, py::arg("value"))
        .def("mean", &Distribution::mean)
        .def("cdf", &Distribution::cdf, py::arg("x"))
        .def("__repr__", &Distribution::describe);

    py::class_<MarketBounds>(mod, "MarketBounds")
        .def(py::init<>())
        .def_readwrite("r_bar", &MarketBounds::r_bar)
        .def_readwrite("a_bar", &MarketBounds::a_bar)
        .def_readwrite("a_lower", &MarketBounds::a_lower)
        .def_readwrite("d_lower", &MarketBounds::d_lower)
        .def_readwrite("d_upper", &MarketBounds::d_upper);

    py::class_<MarketSpec>(mod, "MarketSpec")
        .def(py::init<>())
        .def_static("uniform_1_19", &MarketSpec::uniform_1_19, py::arg("m") = 1)
        .def_readwrite("m", &MarketSpec::m)
        .def_readwrite("reward_law", &MarketSpec::reward_law)
        .def_readwrite("consumption_law", &MarketSpec::consumption_law)
        .def_readwrite("bounds", &MarketSpec::bounds)
        .def_readwrite("impatience_law", &MarketSpec::impatience_law)
        .def("validate", &MarketSpec::validate);

    py::class_<RngKey>(mod, "RngKey")
        .def(py::init([](std::uint64_t seed, std::uint64_t stream) {
                 return RngKey{seed, stream};
             }),
             py::arg("seed") = 0, py::arg("stream") = 0)
        .def_readwrite("seed", &RngKey::seed)
        .def_readwrite("stream", &RngKey::stream);

    py::class_<SampleSet>(mod, "SampleSet")
        .def(py::init(&make_sample_set), py::arg("rewards"), py::arg("consumption"))
        .def_readonly("m", &SampleSet::m)
        .def_readonly("rewards", &SampleSet::rewards)
        .def_readonly("consumption", &SampleSet::consumption)
        .def("__len__", &SampleSet::size);

    py::class_<Stream>(mod, "Stream")
        .def_readonly("m", &Stream::m)
        .def_readonly("horizon", &Stream::horizon)
        .def_readonly("rate", &Stream::rate)
        .def_readonly("rewards", &Stream::rewards)
        .def_readonly("consumption", &Stream::consumption)
        .def_readonly("arrival_times", &Stream::arrival_times)
        .def_readonly("patience", &Stream::patience)
        .def("__len__", &Stream::size)
        .def("to_csv", [](const Stream& s) { return stream_to_csv(s); });

    py::class_<DualPrice>(mod, "DualPrice")
        .def_readonly("price", &DualPrice::price)
        .def_readonly("objective", &DualPrice::objective)
        .def_readonly("active_breakpoint", &DualPrice::active_breakpoint)
        .def_readonly("degenerate", &DualPrice::degenerate)
        .def("scalar", &DualPrice::scalar);

    py::class_<LpSolution>(mod, "LpSolution")
        .def_readonly("primal_values", &LpSolution::primal_values)
        .def_readonly("dual_prices", &LpSolution::dual_prices)
        .def_readonly("optimal_value", &LpSolution::optimal_value)
        .def_readonly("fractional_count", &LpSolution::fractional_count)
        .def_readonly("iterations", &LpSolution::iterations);

    py::class_<BatchSchedule>(mod, "BatchSchedule")
        .def_static("for_count", &BatchSchedule::for_count, py::arg("n"), py::arg("K"))
        .def_static("for_time", &BatchSchedule::for_time, py::arg("T"), py::arg("K"))
        .def_readonly("horizon", &BatchSchedule::horizon)
        .def_readonly("K", &BatchSchedule::K)
        .def_readonly("B", &BatchSchedule::B)
        .def("cut", &BatchSchedule::cut, py::arg("k"));

    py::class_<TrialOutcome>(mod, "TrialOutcome")
        .def_readonly("decisions", &TrialOutcome::decisions)
        .def_readonly("online_reward", &TrialOutcome::online_reward)
        .def_readonly("batch_prices", &TrialOutcome::batch_prices)
        .def_readonly("leftover", &TrialOutcome::leftover)
        .def_readonly("clamp_events", &TrialOutcome::clamp_events)
        .def_readonly("rate_estimates", &TrialOutcome::rate_estimates);

    py::class_<BenchmarkValue>(mod, "BenchmarkValue")
        .def_readonly("value", &BenchmarkValue::value)
        .def_readonly("dual", &BenchmarkValue::dual)
        .def_readonly("accepted_mass", &BenchmarkValue::accepted_mass);

    py::class_<RegretEstimate>(mod, "RegretEstimate")
        .def_readonly("mean", &RegretEstimate::mean)
        .def_readonly("stderr", &RegretEstimate::stderr_mean)
        .def_readonly("trials", &RegretEstimate::trials)
        .def_readonly("min_pathwise", &RegretEstimate::min_pathwise)
        .def_readonly("clamp_events_total", &RegretEstimate::clamp_events_total)
        .def_readonly("pairs", &RegretEstimate::pairs)
        .def_readonly("fingerprint", &RegretEstimate::fingerprint);

    py::class_<ExperimentCell>(mod, "ExperimentCell")
        .def(py::init<>())
        .def_readwrite("spec", &ExperimentCell::spec)
        .def_readwrite("n", &ExperimentCell::n)
        .def_readwrite("lam", &ExperimentCell::lambda)
        .def_readwrite("T", &ExperimentCell::T)
        .def_readwrite("K", &ExperimentCell::K)
        .def_readwrite("d0", &ExperimentCell::d0)
        .def_readwrite("trials", &ExperimentCell::trials)
        .def_readwrite("seed", &ExperimentCell::seed)
        .def_readwrite("workers", &ExperimentCell::workers)
        .def_property(
            "policy",
            [](const ExperimentCell& c) { return to_string(c.policy); },
            [](ExperimentCell& c, const std::string& name) {
                c.policy = policy_from_string(name);
            })
        .def("fingerprint", &ExperimentCell::fingerprint);

    py::class_<LogKFit>(mod, "LogKFit")
        .def_readonly("slope", &LogKFit::slope)
        .def_readonly("intercept", &LogKFit::intercept)
        .def_readonly("r_squared", &LogKFit::r_squared);

    py::class_<ConvergenceStudy>(mod, "ConvergenceStudy")
        .def_readonly("sample_sizes", &ConvergenceStudy::sample_sizes)
        .def_readonly("mse", &ConvergenceStudy::mse)
        .def_readonly("slope", &ConvergenceStudy::slope)
        .def_readonly("population_price", &ConvergenceStudy::population_price);

    mod.def("dual_objective", &dual_objective, py::arg("samples"), py::arg("d"), py::arg("p"));
    mod.def("solve_dual_single", &solve_dual_single, py::arg("samples"), py::arg("d"),
            py::arg("p_max") = std::nullopt);
    mod.def("solve_lp_bounded", &solve_lp_bounded, py::arg("samples"), py::arg("budget"));
    mod.def("population_dual", &population_dual, py::arg("spec"), py::arg("d"));

    mod.def("sample_stream_fixed", &sample_stream_fixed, py::arg("spec"), py::arg("n"),
            py::arg("key"));
    mod.def("sample_stream_poisson", &sample_stream_poisson, py::arg("spec"), py::arg("rate"),
            py::arg("T"), py::arg("key"));
    mod.def("attach_impatience", &attach_impatience, py::arg("stream"), py::arg("spec"),
            py::arg("key"));
    mod.def("sample_history", &sample_history, py::arg("spec"), py::arg("count"),
            py::arg("key"));

    mod.def("run_alg1", &run_alg1, py::arg("stream"), py::arg("b0"), py::arg("K"));
    mod.def("run_alg2", &run_alg2, py::arg("stream"), py::arg("history"), py::arg("b0"),
            py::arg("K"));
    mod.def("run_alg3", &run_alg3, py::arg("stream"), py::arg("b0"), py::arg("T"),
            py::arg("K"), py::arg("bounds"));
    mod.def("run_alg3_known_rate", &run_alg3_known_rate, py::arg("stream"), py::arg("b0"),
            py::arg("T"), py::arg("K"), py::arg("rate"), py::arg("bounds"));
    mod.def("run_alg4", &run_alg4, py::arg("stream"), py::arg("b0"), py::arg("T"),
            py::arg("K"), py::arg("bounds"));
    mod.def("run_ahdla_baseline", &run_ahdla_baseline, py::arg("stream"), py::arg("b0"));

    mod.def(
        "offline_optimum",
        [](const Stream& stream, const std::vector<double>& b0) {
            return offline_optimum(stream, b0);
        },
        py::arg("stream"), py::arg("b0"));
    mod.def(
        "offline_optimum_samples",
        [](const SampleSet& samples, const std::vector<double>& b0) {
            return offline_optimum(samples, b0);
        },
        py::arg("samples"), py::arg("b0"));
    mod.def("filtered_benchmark", &filtered_benchmark, py::arg("stream"), py::arg("b0"),
            py::arg("schedule"));

    mod.def("estimate_regret", &estimate_regret, py::arg("cell"),
            py::arg("keep_pairs") = false);
    mod.def(
        "run_table",
        [](const std::string& preset, const std::string& scale, std::uint64_t seed,
           std::size_t trials, int workers) {
            const TableScale ts = scale == "full" ? TableScale::full : TableScale::desk;
            TableRun run = run_table(preset, ts, seed, trials, workers);
            return py::make_tuple(run.cells, run.estimates,
                                  grid_to_csv(preset, run.cells, run.estimates));
        },
        py::arg("preset"), py::arg("scale") = "desk", py::arg("seed") = 0,
        py::arg("trials") = 1000, py::arg("workers") = 0);
    mod.def("fit_log_k", &fit_log_k, py::arg("estimates"));
    mod.def("dual_convergence_study", &dual_convergence_study, py::arg("spec"), py::arg("d"),
            py::arg("sample_sizes"), py::arg("replications"), py::arg("seed"),
            py::arg("workers") = 0);
    mod.def(
        "solve_batch_size",
        [](const Distribution& impatience, double lambda, double C) {
            return solve_batch_size(BatchSizeQuery{impatience, lambda, C});
        },
        py::arg("impatience"), py::arg("lam"), py::arg("C") = 1.0);
    mod.def(
        "gamma_sweep",
        [](const std::vector<double>& gammas, const std::vector<double>& lambdas, double T,
           const MarketSpec& spec, std::size_t trials, std::uint64_t seed, double d0,
           int workers) {
            GammaSweepResult res =
                gamma_sweep(gammas, lambdas, T, spec, trials, seed, d0, workers);
            return py::make_tuple(res.cells, res.estimates, res.warnings);
        },
        py::arg("gammas"), py::arg("lambdas"), py::arg("T"), py::arg("spec"),
        py::arg("trials"), py::arg("seed") = 0, py::arg("d0") = 5.0, py::arg("workers") = 0);
}
