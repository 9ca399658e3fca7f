"""
Tabulated symmetric stable density
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator


@dataclass(frozen=True, eq=False)
class KernelTable:
    """p_1 on [0, x_max] plus a two-term power-law tail beyond x_max"""

    alpha: float
    grid: np.ndarray
    values: np.ndarray
    x_max: float
    tail_constant: float
    tail_subleading: float
    diagnostics: dict = field(default_factory=dict, compare=False)
    _interp: PchipInterpolator = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.grid.setflags(write=False)
        self.values.setflags(write=False)
        # monotone cubic keeps the table's unimodality between nodes
        object.__setattr__(self, '_interp', PchipInterpolator(self.grid, self.values, extrapolate=False))

    def tail(self, y):
        """Power-law model C1 y^{-1-alpha} + C2 y^{-1-2 alpha} for y > x_max"""
        y = np.asarray(y, dtype=float)
        return (self.tail_constant * y ** (-1.0 - self.alpha)
                + self.tail_subleading * y ** (-1.0 - 2.0 * self.alpha))

    def tail_mass(self):
        """Mass of the two-sided tail beyond +-x_max"""
        a, x = self.alpha, self.x_max
        return 2.0 * (self.tail_constant * x ** (-a) / a
                      + self.tail_subleading * x ** (-2.0 * a) / (2.0 * a))

    def p1(self, y):
        """p_1 at |y|, table inside [0, x_max], tail model outside"""
        y = np.abs(np.asarray(y, dtype=float))
        inside = y <= self.x_max
        out = np.empty_like(y)
        out[inside] = self._interp(y[inside])
        out[~inside] = self.tail(y[~inside])
        return np.maximum(out, 0.0)
