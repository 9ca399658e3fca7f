import numpy as np
import pytest

from roughdrive.errors import ContractError, DomainError
from roughdrive.models.fields import CovSpec
from roughdrive.models.paths import PathSample, TimeGrid
from roughdrive.services import fields
from roughdrive.services.gaussian_sampler import build_cov, cholesky_factor
from roughdrive.services.params import derive_params


@pytest.fixture
def st():
    t = np.linspace(0.05, 1.0, 20)
    return np.meshgrid(t, t, indexing='ij')


def test_fbm_variance_and_origin():
    assert fields.cov_fbm(1.0, 1.0, 0.25) == pytest.approx(1.0)
    assert fields.cov_fbm(0.0, 0.7, 0.25) == 0.0
    assert fields.cov_fbm(0.5, 0.5, 0.5) == pytest.approx(0.5)


def test_bifbm_reduces_to_fbm_at_unit_K():
    s, t = 0.3, 0.8
    assert fields.cov_bifbm(s, t, 0.2, 1.0) == pytest.approx(fields.cov_fbm(s, t, 0.2))


def test_domain_errors():
    with pytest.raises(DomainError):
        fields.cov_fbm(0.1, 0.2, 1.0)
    with pytest.raises(DomainError):
        fields.cov_bifbm(0.1, 0.2, 0.5, 0.0)
    with pytest.raises(DomainError):
        fields.cov_xi(0.1, 0.2, 1.0)
    with pytest.raises(DomainError):
        fields.cov_fbm(-0.1, 0.2, 0.25)


@pytest.mark.parametrize("H", [0.05, 0.2, 0.25])
def test_bifbm_plus_xi_is_fbm(st, H):
    s, t = st
    K = 2.0 * H
    lhs = 2.0 ** (K - 1.0) * (fields.cov_bifbm(s, t, 0.5, K) + fields.cov_xi(s, t, K))
    assert np.max(np.abs(lhs - fields.cov_fbm(s, t, H))) < 1e-12


@pytest.mark.parametrize("H", [0.1, 0.25])
def test_trace_decomposition_residual(st, H):
    s, t = st
    assert np.max(np.abs(fields.decomposition_residual(s, t, derive_params(H)))) < 1e-8


@pytest.mark.parametrize("K", [0.2, 0.5])
def test_xi_quadrature_matches_closed_form(K):
    for s, t in [(0.1, 0.1), (0.25, 0.9), (1.0, 1.0)]:
        assert fields.cov_xi_quadrature(s, t, K) == pytest.approx(fields.cov_xi(s, t, K), abs=1e-8)
    assert fields.cov_xi_quadrature(0.0, 0.5, K) == 0.0


def test_smooth_remainder_is_smooth():
    p = derive_params(0.25)
    eps = np.array([1e-2, 1e-3, 1e-4])
    ratio = fields.smooth_increment_ratio(p, 0.5, eps)
    assert np.all(np.isfinite(ratio))
    assert np.ptp(ratio) / ratio.max() < 0.1


def test_covspec_validation():
    with pytest.raises(DomainError, match="unknown"):
        CovSpec('brownian', {})
    with pytest.raises(DomainError, match="needs"):
        CovSpec('bifbm', {'H': 0.5})
    with pytest.raises(DomainError):
        CovSpec('xi', {'K': 1.0})
    spec = CovSpec.from_params('v_trace', derive_params(0.25))
    assert spec.parameters['alpha'] == pytest.approx(2.0)


def test_covariance_dispatch_matches_trace():
    p = derive_params(0.2)
    cov = fields.covariance(CovSpec.from_params('v_trace', p))
    assert cov(0.3, 0.7) == pytest.approx(fields.cov_v_trace(0.3, 0.7, p))
    rem = fields.covariance(CovSpec.from_params('r_smooth', p))
    assert rem(0.3, 0.7) == pytest.approx(fields.cov_r_smooth(0.3, 0.7, p))


def test_extracted_fbm_has_fbm_covariance():
    p = derive_params(0.25)
    grid = TimeGrid.uniform(1.0, 4, include_zero=False)
    n = 20_000
    v = fields.sample(CovSpec.from_params('v_trace', p), grid, seed=3, n_replicas=n)
    xi = fields.sample_xi(p, grid, seed=3, n_replicas=n)
    X = fields.extract_fbm(v, xi, p)
    assert X.label == "X"
    empirical = X.replicas.T @ X.replicas / n
    s, t = np.meshgrid(grid.points, grid.points, indexing='ij')
    assert np.allclose(empirical, fields.cov_fbm(s, t, 0.25), atol=0.05)


def test_extract_fbm_contracts():
    p = derive_params(0.25)
    grid = TimeGrid.uniform(1.0, 3, include_zero=False)
    other = TimeGrid.uniform(2.0, 3, include_zero=False)
    v = PathSample(grid=grid, replicas=np.zeros((4, 3)), seed=0)
    with pytest.raises(ContractError, match="grid"):
        fields.extract_fbm(v, PathSample(grid=other, replicas=np.zeros((4, 3)), seed=0), p)
    with pytest.raises(ContractError, match="replica counts"):
        fields.extract_fbm(v, PathSample(grid=grid, replicas=np.zeros((5, 3)), seed=0), p)


def test_zero_inputs_extract_to_zero():
    p = derive_params(0.25)
    grid = TimeGrid.uniform(1.0, 3, include_zero=False)
    zeros = PathSample(grid=grid, replicas=np.zeros((2, 3)), seed=0)
    assert np.all(fields.extract_fbm(zeros, zeros, p).replicas == 0.0)


def test_reference_covariance_values():
    assert fields.cov_fbm(1.0, 3.0, 0.25) == pytest.approx(0.5 * (1.0 + 3.0 ** 0.5 - 2.0 ** 0.5))
    assert fields.cov_fbm(1.0, 3.0, 0.25) == pytest.approx(0.658918, abs=1e-6)
    assert fields.cov_bifbm(2.0, 2.0, 0.5, 0.5) == pytest.approx(2.0 ** 0.5)
    assert fields.cov_xi(1.0, 1.0, 0.5) == pytest.approx(0.4142136, abs=1e-7)
    # alpha = 2: c_alpha^2 = pi^{-1/2}
    assert fields.cov_v_trace(1.0, 1.0, derive_params(0.25)) == pytest.approx(np.pi ** -0.5)


@pytest.mark.parametrize("H", [0.2, 0.25])
@pytest.mark.parametrize("kind", ['fbm', 'bifbm', 'xi', 'v_trace', 'r_smooth'])
def test_every_covariance_factors_on_a_fine_grid(kind, H):
    grid = TimeGrid.uniform(1.0, 64)
    cov = build_cov(fields.covariance(CovSpec.from_params(kind, derive_params(H))), grid)
    assert np.linalg.eigvalsh(cov).min() > -1e-10 * np.abs(cov).max()
    factor = cholesky_factor(cov)
    assert np.allclose(factor @ factor.T, cov, atol=1e-6 * np.abs(cov).max())
