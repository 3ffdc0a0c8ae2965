"""Smoke tests for the python bindings: the main operations round-trip."""

import math

import pytest

olpb = pytest.importorskip("olpb")


def test_dual_solver_roundtrip():
    samples = olpb.SampleSet([2.0, 1.0], [[1.0], [1.0]])
    assert olpb.dual_objective(samples, [0.5], [1.5]) == pytest.approx(1.0)
    price = olpb.solve_dual_single(samples, 0.5)
    assert price.scalar() == pytest.approx(2.0)
    assert price.active_breakpoint == 0


def test_lp_and_offline_agree():
    samples = olpb.SampleSet([2.0, 1.0], [[1.0], [1.0]])
    sol = olpb.solve_lp_bounded(samples, [1.0])
    assert sol.optimal_value == pytest.approx(2.0)
    bench = olpb.offline_optimum_samples(samples, [1.0])
    assert bench.value == pytest.approx(2.0)


def test_stream_generation_and_policy():
    spec = olpb.MarketSpec.uniform_1_19(1)
    stream = olpb.sample_stream_fixed(spec, 64, olpb.RngKey(seed=1, stream=0))
    assert len(stream) == 64
    outcome = olpb.run_alg1(stream, 5.0 * 64, 2)
    bench = olpb.offline_optimum(stream, [5.0 * 64])
    assert outcome.online_reward <= bench.value * (1 + 1e-9)
    assert len(outcome.batch_prices) == 2


def test_poisson_policies_run():
    spec = olpb.MarketSpec.uniform_1_19(1)
    spec.impatience_law = olpb.Distribution.exponential(1.0)
    stream = olpb.sample_stream_poisson(spec, 10.0, 12.8, olpb.RngKey(3, 4))
    stream = olpb.attach_impatience(stream, spec, olpb.RngKey(3, 4))
    outcome = olpb.run_alg4(stream, 640.0, 12.8, 4, spec.bounds)
    assert outcome.leftover[0] >= 0.0
    sched = olpb.BatchSchedule.for_time(12.8, 4)
    filtered = olpb.filtered_benchmark(stream, [640.0], sched)
    plain = olpb.offline_optimum(stream, [640.0])
    assert filtered.value <= plain.value * (1 + 1e-12)


def test_estimate_regret_deterministic():
    cell = olpb.ExperimentCell()
    cell.policy = "alg1"
    cell.spec = olpb.MarketSpec.uniform_1_19(1)
    cell.n = 64
    cell.K = 2
    cell.trials = 5
    cell.seed = 9
    a = olpb.estimate_regret(cell)
    b = olpb.estimate_regret(cell)
    assert a.mean == b.mean
    assert a.mean >= -1e-9


def test_population_and_batch_size():
    spec = olpb.MarketSpec.uniform_1_19(1)
    price = olpb.population_dual(spec, 5.0)
    assert price.scalar() == pytest.approx(0.7873878873165, abs=1e-6)
    b = olpb.solve_batch_size(olpb.Distribution.exponential(1.0), 1e6, 1.0)
    assert 0.00095 <= b <= 0.00105


def test_fit_log_k():
    pts = [(k, 3.0 * math.log(k)) for k in (2, 8, 32)]
    fit = olpb.fit_log_k(pts)
    assert fit.slope == pytest.approx(3.0)
    assert fit.r_squared == pytest.approx(1.0)
