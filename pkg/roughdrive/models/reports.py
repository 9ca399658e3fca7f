"""
Experiment reports.

Every report carries the seed, config hash and replica count that produced
it, a flat record for the manifest, CSV rows (epsilon, estimate, se) and
log-log plot points.
"""
import math
from dataclasses import dataclass, field, fields

import numpy as np


def _plain(value):
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


class ReportMixin:
    """Serialization shared by all reports"""

    csv_header = ('epsilon', 'estimate', 'se')

    def as_record(self):
        return {f.name: _plain(getattr(self, f.name)) for f in fields(self)}

    def rows(self):
        return []

    def plot_points(self):
        """(log10 eps, log10 moment) pairs; empty when nothing is plotted"""
        return [], []


@dataclass(frozen=True, eq=False)
class RateFit(ReportMixin):
    """Weighted log-log fit of second moments against decreasing lags"""

    name: str
    epsilons: np.ndarray
    moments: np.ndarray
    moment_se: np.ndarray
    slope: float
    slope_se: float
    intercept: float
    reference_slope: float
    passed: bool
    n_replicas: int
    seed: int
    t_probe: float
    degenerate: bool = False
    raw_slope: float = float('nan')
    reference_moments: np.ndarray = None
    notes: dict = field(default_factory=dict)
    config_hash: str = ""

    def rows(self):
        return [(float(e), float(m), float(s))
                for e, m, s in zip(self.epsilons, self.moments, self.moment_se)]

    def plot_points(self):
        positive = self.moments > 0
        return np.log10(self.epsilons[positive]), np.log10(self.moments[positive])


@dataclass(frozen=True, eq=False)
class WeakSolutionReport(ReportMixin):
    """Exceedance probabilities of |dY/dX - g(Y_t)| > delta as the lag shrinks"""

    delta: float
    epsilons: np.ndarray
    exceed_probs: np.ndarray
    exceed_se: np.ndarray
    theta_moments: np.ndarray
    chebyshev_terms: np.ndarray
    tail_probs: np.ndarray
    b_exponent: float
    t_probe: float
    excluded: int
    exclusion_fraction: float
    passed: bool
    n_replicas: int
    seed: int
    config_hash: str = ""

    def rows(self):
        return [(float(e), float(p), float(s))
                for e, p, s in zip(self.epsilons, self.exceed_probs, self.exceed_se)]

    def plot_points(self):
        positive = self.theta_moments > 0
        return np.log10(self.epsilons[positive]), np.log10(self.theta_moments[positive])


@dataclass(frozen=True, eq=False)
class CovDecompositionReport(ReportMixin):
    """Residuals of the covariance identities over a grid of time pairs"""

    H: float
    K: float
    n_points: int
    bifbm_residual: float
    trace_residual: float
    quadrature_residual: float
    passed: bool
    tolerance: float
    seed: int = 0
    n_replicas: int = 0
    config_hash: str = ""

    csv_header = ('identity', 'residual', 'tolerance')

    def rows(self):
        return [
            ('bifbm_plus_xi', self.bifbm_residual, self.tolerance),
            ('trace_plus_remainder', self.trace_residual, self.tolerance),
            ('xi_quadrature', self.quadrature_residual, self.tolerance),
        ]


@dataclass(frozen=True, eq=False)
class LinearLawReport(ReportMixin):
    """Simulated Var and Cov of v_t(0) against the closed form and the discretized oracle"""

    times: np.ndarray
    empirical_var: np.ndarray
    var_se: np.ndarray
    continuum_var: np.ndarray
    discrete_var: np.ndarray
    corr_times: tuple
    corr_empirical: float
    corr_se: float
    corr_discrete: float
    corr_continuum: float
    matrix_points: int
    matrix_max_excess: float
    passed: bool
    n_replicas: int
    seed: int
    config_hash: str = ""

    csv_header = ('t', 'estimate', 'se', 'continuum', 'discrete')

    def rows(self):
        return [(float(t), float(m), float(s), float(c), float(d)) for t, m, s, c, d in zip(
            self.times, self.empirical_var, self.var_se, self.continuum_var, self.discrete_var)]

    def plot_points(self):
        return np.log10(self.times), np.log10(self.empirical_var)


@dataclass(frozen=True, eq=False)
class MomentBoundReport(ReportMixin):
    """sup_t E|u_t(0)|^k under successive halvings of dt"""

    dts: np.ndarray
    sup_second: np.ndarray
    sup_second_se: np.ndarray
    sup_fourth: np.ndarray
    relative_changes: np.ndarray
    passed: bool
    n_replicas: int
    seed: int
    config_hash: str = ""

    csv_header = ('dt', 'sup_second_moment', 'se', 'sup_fourth_moment')

    def rows(self):
        return [(float(d), float(m), float(s), float(q))
                for d, m, s, q in zip(self.dts, self.sup_second, self.sup_second_se, self.sup_fourth)]


@dataclass(frozen=True, eq=False)
class KernelIdentityReport(ReportMixin):
    """Closed-form functionals of p_t against the tabulated density"""

    alpha: float
    mass_error: float
    l2_relative_error: float
    peak_error: float
    chapman_kolmogorov_error: float
    gaussian_error: float
    tail_constant: float
    tail_asymptote: float
    tolerances: dict
    passed: bool
    seed: int = 0
    n_replicas: int = 0
    config_hash: str = ""

    csv_header = ('check', 'error', 'tolerance')

    def rows(self):
        errors = {
            'mass': self.mass_error,
            'l2_relative': self.l2_relative_error,
            'peak': self.peak_error,
            'chapman_kolmogorov': self.chapman_kolmogorov_error,
            'gaussian': self.gaussian_error,
        }
        return [(name, errors[name], tol) for name, tol in self.tolerances.items()
                if not math.isnan(errors[name])]


@dataclass(frozen=True, eq=False)
class ConstantIdentityReport(ReportMixin):
    """Largest residual of each constant identity over random Hurst exponents"""

    n_samples: int
    max_residuals: dict
    ratio_min: float
    ratio_max: float
    tolerance: float
    passed: bool
    seed: int
    n_replicas: int = 0
    config_hash: str = ""

    csv_header = ('identity', 'max_residual', 'tolerance')

    def rows(self):
        return [(name, value, self.tolerance) for name, value in sorted(self.max_residuals.items())]
