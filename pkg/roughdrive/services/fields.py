"""
Covariance functions of fBm, bi-fBm, the smooth process xi, the linear
heat-equation trace v_t(0) and its smooth remainder R, plus the extraction
of the driving fBm from a linear trace.

All processes start at 0, so every covariance vanishes when either time is 0.
"""
import logging
import math

import numpy as np
from scipy.special import gamma

from roughdrive.errors import ContractError, DomainError
from roughdrive.models.fields import CovSpec
from roughdrive.models.paths import PathSample
from roughdrive.services.gaussian_sampler import quadrature_0_inf, sample_process

logger = logging.getLogger(__name__)


def _times(s, t):
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s < 0) or np.any(t < 0):
        raise DomainError("covariance arguments must be non-negative times")
    return s, t


def _out(value):
    return value if np.ndim(value) else float(value)


def cov_fbm(s, t, H):
    """(s^{2H} + t^{2H} - |t-s|^{2H}) / 2"""
    if not 0.0 < H < 1.0:
        raise DomainError(f"H={H} must lie in (0, 1)")
    s, t = _times(s, t)
    h2 = 2.0 * H
    return _out(0.5 * (s ** h2 + t ** h2 - np.abs(t - s) ** h2))


def cov_bifbm(s, t, H, K):
    """2^{-K} ([t^{2H} + s^{2H}]^K - |t-s|^{2HK})"""
    if not 0.0 < H < 1.0:
        raise DomainError(f"H={H} must lie in (0, 1)")
    if not 0.0 < K <= 1.0:
        raise DomainError(f"K={K} must lie in (0, 1]")
    s, t = _times(s, t)
    h2 = 2.0 * H
    return _out(2.0 ** -K * ((t ** h2 + s ** h2) ** K - np.abs(t - s) ** (h2 * K)))


def _check_xi_K(K):
    if not 0.0 < K < 1.0:
        raise DomainError(f"K={K} must lie in (0, 1) for the smooth process xi")


def cov_xi(s, t, K):
    """Closed form 2^{-K} (t^K + s^K - (t+s)^K)"""
    _check_xi_K(K)
    s, t = _times(s, t)
    return _out(2.0 ** -K * (t ** K + s ** K - (t + s) ** K))


def cov_xi_quadrature(s, t, K):
    """
    Wiener isometry for xi_t = sqrt(K / (2^K Gamma(1-K))) int (1 - e^{-rt}) r^{-(1+K)/2} dW_r,
    evaluated by quadrature on (0, inf).
    """
    _check_xi_K(K)
    s, t = (float(v) for v in _times(s, t))
    if s == 0.0 or t == 0.0:
        return 0.0
    const = K / (2.0 ** K * gamma(1.0 - K))

    def integrand(r):
        return const * math.expm1(-r * t) * math.expm1(-r * s) * r ** (-1.0 - K)

    return quadrature_0_inf(integrand, singularity_order=0.0, tail_order=K)


def cov_v_trace(s, t, params):
    """c_alpha^2 2^{(1-alpha)/alpha} (|t+s|^{(alpha-1)/alpha} - |t-s|^{(alpha-1)/alpha})"""
    s, t = _times(s, t)
    exponent = (params.alpha - 1.0) / params.alpha
    return _out(params.c_alpha ** 2 * 2.0 ** -exponent
                * (np.abs(t + s) ** exponent - np.abs(t - s) ** exponent))


def cov_r_smooth(s, t, params):
    """Covariance of R = c_alpha xi with xi at K = 2H"""
    return _out(params.c_alpha ** 2 * np.asarray(cov_xi(s, t, 2.0 * params.H)))


def decomposition_residual(s, t, params):
    """
    c_alpha^2 2^{1-K} cov_fbm - (cov_v_trace + cov_r_smooth).

    R is independent of v, so the fBm part carries both variances.
    """
    K = 2.0 * params.H
    lhs = params.c_alpha ** 2 * 2.0 ** (1.0 - K) * np.asarray(cov_fbm(s, t, params.H))
    rhs = np.asarray(cov_v_trace(s, t, params)) + np.asarray(cov_r_smooth(s, t, params))
    return _out(lhs - rhs)


def smooth_increment_ratio(params, t, eps):
    """||R_{t+eps} - R_t||_2 / (t^{H-1} eps); bounded when R is smooth away from 0"""
    t = np.asarray(t, dtype=float)
    eps = np.asarray(eps, dtype=float)
    var = (np.asarray(cov_r_smooth(t + eps, t + eps, params))
           + np.asarray(cov_r_smooth(t, t, params))
           - 2.0 * np.asarray(cov_r_smooth(t, t + eps, params)))
    return _out(np.sqrt(np.maximum(var, 0.0)) / (t ** (params.H - 1.0) * eps))


def covariance(spec):
    """Covariance callable (s, t) for a CovSpec"""
    p = spec.parameters
    if spec.kind == 'fbm':
        return lambda s, t: cov_fbm(s, t, p['H'])
    if spec.kind == 'bifbm':
        return lambda s, t: cov_bifbm(s, t, p['H'], p['K'])
    if spec.kind == 'xi':
        return lambda s, t: cov_xi(s, t, p['K'])
    if spec.kind == 'v_trace':
        exponent = (p['alpha'] - 1.0) / p['alpha']
        return lambda s, t: p['c_alpha'] ** 2 * np.asarray(cov_bifbm(s, t, 0.5, exponent))
    return lambda s, t: p['c_alpha'] ** 2 * np.asarray(cov_xi(s, t, 2.0 * p['H']))


def sample(spec, grid, seed, n_replicas, namespace='sample'):
    """Exact Cholesky sample of the process described by spec"""
    return sample_process(covariance(spec), grid, seed, n_replicas, namespace=namespace, label=spec.kind)


def sample_xi(params, grid, seed, n_replicas):
    """xi at K = 2H from the dedicated 'xi' stream namespace"""
    return sample(CovSpec.from_params('xi', params), grid, seed, n_replicas, namespace='xi')


def extract_fbm(v_trace, xi, params):
    """
    X_t = 2^{-(1-K)/2} (v_t(0) / c_alpha - xi_t), K = 2H.

    v / c_alpha is bi-fBm(1/2, K); adding an independent xi (either sign)
    makes the covariance 2^{1-K} times that of fBm(H).
    """
    if not v_trace.grid.same_as(xi.grid):
        raise ContractError("v trace and xi must share the same time grid")
    if v_trace.n_replicas != xi.n_replicas:
        raise ContractError(
            f"replica counts differ: v has {v_trace.n_replicas}, xi has {xi.n_replicas}"
        )
    K = 2.0 * params.H
    x = 2.0 ** (-(1.0 - K) / 2.0) * (v_trace.replicas / params.c_alpha - xi.replicas)
    return PathSample(grid=v_trace.grid, replicas=x, seed=v_trace.seed, label="X")
