import math
from dataclasses import replace

import numpy as np
import pytest

from roughdrive.errors import ContractError, DegenerateInputError, DomainError
from roughdrive.models.paths import PathSample, TimeGrid
from roughdrive.models.simulation import GridConfig
from roughdrive.services import experiments, fields, spde_sim
from roughdrive.services.gaussian_sampler import sample_process
from roughdrive.services.params import constant_drift_pair, derive_params, make_drift_pair


@pytest.fixture
def fine_grid():
    """64 steps of 2^-8 recorded at every step, so six dyadic lags fit after T/2"""
    return GridConfig(L=16.0, N=64, dt=2.0 ** -8, n_steps=64, record_every=1)


def exact_fbm(H, n_replicas=5000, seed=7):
    grid = TimeGrid.uniform(1.0, 65)
    return sample_process(lambda s, t: fields.cov_fbm(s, t, H), grid, seed, n_replicas, label="X")


def test_second_moment():
    m, se = experiments.second_moment(np.array([1.0, -1.0, 1.0, -1.0]))
    assert m == 1.0
    assert se == 0.0


def test_fit_recovers_power_law():
    eps = 2.0 ** -np.arange(2, 8)
    moments = 3.0 * eps ** 0.5
    slope, slope_se, intercept = experiments.fit_log_slope(eps, moments, 0.01 * moments)
    assert slope == pytest.approx(0.5, abs=1e-10)
    assert intercept == pytest.approx(math.log(3.0), abs=1e-10)
    assert slope_se > 0


def test_dyadic_lags_are_decreasing():
    grid = TimeGrid.uniform(1.0, 65)
    assert experiments.default_probe(grid) == 0.5
    eps = experiments.dyadic_lags(grid, 0.5)
    assert eps[0] == 0.5 and eps[-1] == 1.0 / 64
    assert np.all(np.diff(eps) < 0)


def test_lag_checks():
    with pytest.raises(ContractError, match="at least"):
        experiments._check_lags([0.1, 0.05, 0.025])
    with pytest.raises(ContractError, match="decreasing"):
        experiments._check_lags([0.01, 0.02, 0.04, 0.08])
    with pytest.raises(ContractError, match="decades"):
        experiments._check_lags([0.08, 0.04, 0.02, 0.01])


@pytest.mark.parametrize("H", [0.25, 0.5])
def test_exact_fbm_increments_pass(H):
    report = experiments.estimate_fbm_increments(exact_fbm(H), H)
    assert report.passed
    assert report.slope == pytest.approx(2.0 * H, abs=0.1)
    assert report.reference_slope == 2.0 * H
    assert len(report.rows()) == 6


def test_fbm_increments_need_replicas():
    with pytest.raises(ContractError, match="replicas"):
        experiments.estimate_fbm_increments(exact_fbm(0.25, n_replicas=10), 0.25)


def test_wrong_hurst_fails():
    report = experiments.estimate_fbm_increments(exact_fbm(0.5), 0.25)
    assert not report.passed


def test_holder_slope_with_oracle():
    X = exact_fbm(0.25)
    p = derive_params(0.25)
    report = experiments.estimate_holder_slope(X, p, oracle_cov=lambda s, t: fields.cov_fbm(s, t, 0.25))
    assert 0.4 <= report.slope <= 0.65
    assert report.notes['max_z'] < 5.0
    assert report.reference_moments.shape == report.moments.shape


def test_holder_slope_rejects_constant_path():
    grid = TimeGrid.uniform(1.0, 65)
    flat = PathSample(grid=grid, replicas=np.full((10, 65), 2.0), seed=0)
    with pytest.raises(DegenerateInputError):
        experiments.estimate_holder_slope(flat, derive_params(0.25))


def test_gaussian_tail_probe():
    assert experiments.gaussian_tail_probe(1.0, 0.3, 0.25, 1.0) == pytest.approx(0.682689, abs=1e-6)
    assert experiments.gaussian_tail_probe(0.0, 0.3, 0.25, 1.0) == 0.0
    with pytest.raises(DomainError):
        experiments.gaussian_tail_probe(1.0, 0.5, 0.25, 1.0)
    with pytest.raises(DomainError):
        experiments.gaussian_tail_probe(1.0, 0.3, 0.25, 0.0)


def test_gaussian_tail_probe_shrinks_with_eps():
    eps = np.array([2.0 ** -k for k in range(2, 9)])
    probs = experiments.gaussian_tail_probe(eps, 0.3, 0.25, 0.5)
    assert np.all(np.diff(probs) < 0.0)
    assert probs[-1] > 0.0


def test_default_split_exponent(params):
    b = experiments.default_b_exponent(params)
    assert params.H < b < params.G_H


def test_unit_coefficient_correction_is_degenerate(fine_grid, params, unit_f):
    traces = spde_sim.simulate_coupled(fine_grid, params, unit_f, seed=12, n_replicas=8)
    report = experiments.estimate_correction_rate(traces, unit_f)
    assert report.degenerate
    assert report.passed
    assert math.isnan(report.slope)
    assert report.as_record()['slope'] is None


def test_correction_rate_needs_coupled_traces(fine_grid, params, unit_f):
    traces = spde_sim.simulate_coupled(fine_grid, params, unit_f, seed=12, n_replicas=2)
    with pytest.raises(ContractError, match="same noise"):
        experiments.estimate_correction_rate(replace(traces, coupled=False), unit_f)


def test_sin_drift_at_its_zero_is_degenerate(fine_grid, params, sin_drift):
    traces = spde_sim.simulate_coupled(fine_grid, params, sin_drift, seed=12, n_replicas=8)
    assert np.all(traces.u0_trace.replicas == 0.0)
    with pytest.raises(DegenerateInputError, match="not constant"):
        experiments.estimate_correction_rate(traces, sin_drift)
    with pytest.raises(DegenerateInputError, match="not constant"):
        experiments.verify_weak_solution(traces, sin_drift, params)


def test_zero_drift_weak_solution(fine_grid):
    p = derive_params(0.25, Y0=0.3)
    zero = constant_drift_pair(0.0, p, of='g')
    traces = spde_sim.simulate_coupled(fine_grid, p, zero, seed=5, n_replicas=50)
    report = experiments.verify_weak_solution(traces, zero, p)
    assert report.passed
    assert np.all(report.exceed_probs == 0.0)
    assert np.all(report.theta_moments == 0.0)
    assert report.excluded == 0
    assert len(report.epsilons) == 6


def test_weak_solution_rejects_bad_split(fine_grid, params, unit_f):
    traces = spde_sim.simulate_coupled(fine_grid, params, unit_f, seed=5, n_replicas=4)
    with pytest.raises(DomainError):
        experiments.verify_weak_solution(traces, unit_f, params, b_exponent=0.2)


@pytest.mark.parametrize("H", [0.1, 0.2, 0.25])
def test_cov_decomposition(H):
    grid = TimeGrid(np.linspace(0.05, 1.0, 20))
    report = experiments.verify_cov_decomposition(H, grid, quadrature_points=4)
    assert report.passed
    assert report.bifbm_residual < 1e-10
    assert [row[0] for row in report.rows()] == ['bifbm_plus_xi', 'trace_plus_remainder', 'xi_quadrature']


def test_constant_identities():
    report = experiments.verify_constant_identities(seed=1, n_samples=200)
    assert report.passed
    assert 1.6 - 1e-12 <= report.ratio_min <= report.ratio_max < 2.0
    assert set(report.max_residuals) == {
        'alpha_roundtrip', 'kappa_equals_c', 'G_from_split', 'G_from_double_split', 'K_equals_2H',
    }


@pytest.mark.slow
def test_linear_law_against_closed_form(params):
    cfg = GridConfig.from_horizon(16.0, 1024, 2.0 ** -10, 0.25, record_every=4)
    v = spde_sim.simulate_linear(cfg, params, seed=2024, n_replicas=2000, block_size=250)
    report = experiments.verify_linear_law(v, params, cfg, times=(0.0625, 0.125, 0.25),
                                           corr_times=(0.125, 0.25))
    assert report.passed


@pytest.mark.slow
def test_unit_coefficient_holder_slope_and_weak_solution(params, unit_f):
    cfg = GridConfig.from_horizon(16.0, 2048, 2.0 ** -11, 0.5, record_every=4)
    traces = spde_sim.simulate_coupled(cfg, params, unit_f, seed=1729, n_replicas=1000, workers=4)

    def oracle(s, t):
        return spde_sim.discrete_cov_v_trace(cfg, params, s, t)

    holder = experiments.estimate_holder_slope(traces.u0_trace, params, oracle_cov=oracle)
    assert 0.4 <= holder.slope <= 0.65
    assert holder.notes['max_z'] < 5.0
    weak = experiments.verify_weak_solution(traces, unit_f, params)
    assert weak.passed
    assert weak.excluded == 0


def test_moment_bound_under_refinement(small_grid, params, unit_f):
    report = experiments.estimate_moment_bound(small_grid, params, unit_f, seed=3, n_replicas=40,
                                               refinements=1)
    assert report.dts.tolist() == [small_grid.dt, small_grid.dt / 2]
    assert np.all(np.isfinite(report.sup_second))
    assert np.all(report.sup_fourth >= report.sup_second ** 2 * (1.0 - 1e-12))
    assert report.relative_changes.shape == (1,)


@pytest.mark.slow
def test_linear_law_at_fifth_hurst():
    p = derive_params(0.2)
    cfg = GridConfig.from_horizon(16.0, 1024, 2.0 ** -10, 1.0, record_every=4)
    v = spde_sim.simulate_linear(cfg, p, seed=2718, n_replicas=2000, workers=4)
    report = experiments.verify_linear_law(v, p, cfg)
    assert report.passed
    assert report.matrix_points == 16


@pytest.mark.slow
def test_simulated_driver_is_fbm(params):
    cfg = GridConfig.from_horizon(16.0, 2048, 2.0 ** -10, 0.5, record_every=2)
    n = 4000
    v = spde_sim.simulate_linear(cfg, params, seed=11, n_replicas=n, workers=4)
    xi = fields.sample_xi(params, v.grid, seed=11, n_replicas=n)
    X = fields.extract_fbm(v, xi, params)
    report = experiments.estimate_fbm_increments(X, params.H, t_probe=0.25,
                                                 epsilons=2.0 ** -np.arange(3, 9))
    assert report.passed
    assert abs(report.slope - 0.5) <= 0.1


@pytest.mark.slow
def test_sin_drift_correction_and_weak_solution():
    p = derive_params(0.25, Y0=1.0)
    drift = make_drift_pair(np.sin, p, lip_g=1.0, name='sin')
    cfg = GridConfig.from_horizon(16.0, 512, 2.0 ** -10, 1.0, record_every=2)
    traces = spde_sim.simulate_coupled(cfg, p, drift, seed=31415, n_replicas=2000, workers=4)

    correction = experiments.estimate_correction_rate(traces, drift)
    assert not correction.degenerate
    assert correction.passed
    assert correction.slope >= 2.0 * p.H + 0.15
    assert correction.slope - correction.raw_slope >= 0.15

    weak = experiments.verify_weak_solution(traces, drift, p, delta=0.5)
    assert weak.passed
    assert weak.exceed_probs[0] > 0.0
    assert weak.exceed_probs[-1] < weak.exceed_probs[0] / 2.0
