"""
Exact Gaussian sampling from covariance functions on a time grid, and
quadrature on (0, inf) for Wiener-integral covariances.
"""
import logging
import math

import numpy as np
from scipy import integrate
from scipy.linalg import LinAlgError, cholesky

from roughdrive.errors import ContractError, DomainError, NumericError
from roughdrive.models.paths import PathSample, TimeGrid
from roughdrive.services import rng

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-10
# diagonal shifts relative to the largest variance, tried in order
JITTER_LADDER = (0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8)
QUAD_LIMIT = 200
QUAD_FAIL_TOL = 1e-10


def build_cov(cov_fn, grid):
    """Covariance matrix [cov_fn(t_i, t_j)] on the grid points"""
    t = grid.points
    s_mat, t_mat = np.meshgrid(t, t, indexing='ij')
    cov = np.asarray(cov_fn(s_mat, t_mat), dtype=float)
    if cov.shape != s_mat.shape:
        cov = np.vectorize(cov_fn, otypes=[float])(s_mat, t_mat)
    _check_symmetric(cov)
    return cov


def _check_symmetric(cov):
    scale = max(1.0, float(np.max(np.abs(cov)))) if cov.size else 1.0
    asym = float(np.max(np.abs(cov - cov.T))) if cov.size else 0.0
    if asym > SYMMETRY_TOL * scale:
        raise ContractError(f"covariance is not symmetric (max asymmetry {asym:.3e})")


def cholesky_factor(cov):
    """
    Lower factor L with L L^T = cov (up to jitter).

    Rows with zero variance are zero in the factor, so degenerate points such
    as t = 0 of a process started at the origin sample exactly 0.
    """
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    _check_symmetric(cov)
    diag = np.diag(cov)
    if np.any(diag < 0):
        raise NumericError("covariance has a negative variance", {'min_diag': float(diag.min())})

    factor = np.zeros_like(cov)
    active = diag > 0
    if not active.any():
        return factor

    sub = cov[np.ix_(active, active)]
    scale = float(diag.max())
    eye = np.eye(sub.shape[0])
    for shift in JITTER_LADDER:
        try:
            lower = cholesky(sub + shift * scale * eye, lower=True)
        except LinAlgError:
            continue
        if shift:
            logger.warning("Cholesky needed jitter %.0e (relative to max variance %.3e)", shift, scale)
        factor[np.ix_(active, active)] = lower
        return factor

    min_eig = float(np.linalg.eigvalsh(sub).min())
    raise NumericError(
        f"Cholesky failed after jitter up to {JITTER_LADDER[-1]:.0e}; smallest eigenvalue {min_eig:.3e}",
        {'min_eigenvalue': min_eig, 'max_jitter': JITTER_LADDER[-1]},
    )


def replica_normals(seed, namespace, replicas, n):
    """Standard normals, one row of length n per replica index"""
    return np.stack([
        rng.standard_normals(rng.replica_stream(seed, namespace, r), n) for r in replicas
    ]) if len(replicas) else np.empty((0, n))


def cholesky_sample(cov, seed, n_replicas, grid=None, namespace='sample', label=""):
    """
    Draw n_replicas i.i.d. N(0, cov) rows.

    Replica i always uses the stream derived from (seed, namespace, i).
    """
    if n_replicas < 1:
        raise ContractError(f"n_replicas={n_replicas} must be >= 1")
    factor = cholesky_factor(cov)
    n = factor.shape[0]
    if grid is None:
        grid = TimeGrid(np.arange(n, dtype=float))
    z = replica_normals(seed, namespace, range(n_replicas), n)
    return PathSample(grid=grid, replicas=z @ factor.T, seed=int(seed), label=label)


def sample_process(cov_fn, grid, seed, n_replicas, namespace='sample', label=""):
    """build_cov followed by cholesky_sample"""
    cov = build_cov(cov_fn, grid)
    return cholesky_sample(cov, seed, n_replicas, grid=grid, namespace=namespace, label=label)


def _quad(func, a, b, epsabs, epsrel):
    result = integrate.quad(func, a, b, epsabs=epsabs, epsrel=epsrel, limit=QUAD_LIMIT, full_output=1)
    value, abserr, info = result[0], result[1], result[2]
    # QUADPACK flags roundoff at tight tolerances; only a large error estimate is fatal
    if len(result) > 3 and abserr > QUAD_FAIL_TOL * max(1.0, abs(value)):
        raise NumericError(
            f"adaptive quadrature on [{a}, {b}] did not converge: {result[3]}",
            {'value': value, 'abserr': abserr, 'neval': info.get('neval')},
        )
    return value, abserr


def quadrature_0_inf(integrand, singularity_order=0.0, tail_order=None, epsabs=1e-13, epsrel=1e-12):
    """
    int_0^inf integrand(r) dr for integrands ~ r^{-s} near 0.

    [0, 1] is mapped by r = u^{1/(1-s)}, which removes the endpoint
    singularity. On [1, inf) an algebraic decay r^{-1-p} is flattened by
    r = u^{-1/p} when tail_order p is given; otherwise QUADPACK's infinite
    interval rule is used.
    """
    s = float(singularity_order)
    if not 0.0 <= s < 1.0:
        raise DomainError(f"singularity order {s} must lie in [0, 1)")
    m = 1.0 / (1.0 - s)

    def head(u):
        return integrand(u ** m) * m * u ** (m - 1.0)

    value, _ = _quad(head, 0.0, 1.0, epsabs, epsrel)

    if tail_order is None:
        tail_value, _ = _quad(integrand, 1.0, math.inf, epsabs, epsrel)
    else:
        p = float(tail_order)
        if p <= 0:
            raise DomainError(f"tail order {p} must be positive")

        def tail(u):
            return integrand(u ** (-1.0 / p)) * u ** (-1.0 / p - 1.0) / p

        tail_value, _ = _quad(tail, 0.0, 1.0, epsabs, epsrel)

    return value + tail_value
