"""
Model parameters - derived constants, drift pairs and their identities
"""
import logging
import math

import numpy as np
from scipy.special import gamma

from roughdrive.errors import DomainError
from roughdrive.models.params import DriftPair, ModelParams

logger = logging.getLogger(__name__)

H_MAX = 0.25
LIP_PROBE_POINTS = 10_000
LIP_PROBE_RANGE = (-10.0, 10.0)


def dalang_condition(alpha):
    """True iff 1 < alpha <= 2, the range with a function-valued solution"""
    return 1.0 < alpha <= 2.0


def alpha_from_hurst(H):
    return 1.0 / (1.0 - 2.0 * H)


def hurst_from_alpha(alpha):
    return (alpha - 1.0) / (2.0 * alpha)


def kappa(H):
    """Amplitude relating Y to the heat-equation trace"""
    return math.sqrt((1.0 - 2.0 * H) * gamma(1.0 - 2.0 * H) / (2.0 * math.pi * H))


def c_alpha(alpha):
    """Amplitude of the bi-fBm inside the linear heat-equation trace"""
    return math.sqrt(gamma(1.0 / alpha) / (math.pi * (alpha - 1.0)))


def correction_exponent(H):
    return 2.0 * H / (1.0 + H)


def derive_params(H, Y0=0.0, T=1.0):
    """
    Derive all constants from the Hurst exponent.

    Raises DomainError outside (0, 1/4]; through alpha = 1/(1-2H) that interval
    is exactly Dalang's condition 1 < alpha <= 2.
    """
    if not isinstance(H, (int, float)) or not math.isfinite(H) or not 0.0 < H <= H_MAX:
        raise DomainError(
            f"Hurst exponent H={H} must lie in (0, 1/4]; "
            f"this is Dalang's condition 1 < alpha <= 2 for alpha = 1/(1-2H)"
        )
    if not T > 0:
        raise DomainError(f"horizon T={T} must be positive")

    H = float(H)
    alpha = alpha_from_hurst(H)
    a_split = 1.0 / (1.0 + H)

    params = ModelParams(
        H=H,
        alpha=alpha,
        K=(alpha - 1.0) / alpha,
        kappa_H=kappa(H),
        c_alpha=c_alpha(alpha),
        G_H=correction_exponent(H),
        a_split=a_split,
        Y0=float(Y0),
        T=float(T),
    )
    logger.debug("derived params %s", params)
    return params


def estimate_lipschitz(func, probe_range=LIP_PROBE_RANGE, n_points=LIP_PROBE_POINTS):
    """
    Largest divided difference of func over a uniform probe grid.

    This is a lower bound for the optimal Lipschitz constant.
    """
    x = np.linspace(probe_range[0], probe_range[1], n_points)
    y = np.broadcast_to(np.asarray(func(x), dtype=float), x.shape)
    slopes = np.abs(np.diff(y) / np.diff(x))
    return float(np.max(slopes)) if slopes.size else 0.0


def drift_scale(params):
    """The factor 2^H / (kappa_H^2 sqrt 2) mapping g onto f"""
    return 2.0 ** params.H / (params.kappa_H ** 2 * math.sqrt(2.0))


def make_drift_pair(g, params, lip_g=None, name="custom"):
    """Build the pair (g, f); lip_g is estimated by probing when not supplied"""
    scale = drift_scale(params)

    def f(x):
        return scale * np.asarray(g(x), dtype=float)

    if lip_g is None:
        lip_g = estimate_lipschitz(g)
    return DriftPair(g=g, f=f, lip_g=float(lip_g), scale=scale, name=name)


def identity_residuals(params):
    """Residuals of every inter-constant identity, keyed by name"""
    H, alpha, a = params.H, params.alpha, params.a_split
    return {
        'alpha_roundtrip': abs(hurst_from_alpha(alpha) - H),
        'kappa_equals_c': abs(params.kappa_H - params.c_alpha) / params.c_alpha,
        'G_from_split': abs((1.0 - a * (1.0 - H)) - params.G_H),
        'G_from_double_split': abs(2.0 * a * H - params.G_H),
        'K_equals_2H': abs(params.K - 2.0 * H),
    }


def g_to_f_ratio(params):
    """c_alpha^2 2^{1/(2 alpha)}, the constant with g = ratio * f"""
    return params.c_alpha ** 2 * params.fbm_scale


def constant_drift_pair(value, params, of='g'):
    """Pair with g (of='g') or f (of='f') identically equal to value"""
    if of not in ('g', 'f'):
        raise DomainError(f"constant drift must fix 'g' or 'f', got {of!r}")
    scale = drift_scale(params)
    if of == 'f':
        f_value = float(value)
        g_value = f_value * g_to_f_ratio(params)
    else:
        g_value = float(value)
        f_value = scale * g_value

    def g(x):
        return np.full(np.shape(x), g_value)

    def f(x):
        return np.full(np.shape(x), f_value)

    return DriftPair(g=g, f=f, lip_g=0.0, scale=scale, name=f"{of}-const:{value:g}", constant_f=f_value)
