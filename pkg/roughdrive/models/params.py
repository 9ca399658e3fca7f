"""
Model constants and drift functions
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """Every scalar constant tied to a Hurst exponent H in (0, 1/4]"""

    H: float
    alpha: float
    K: float
    kappa_H: float
    c_alpha: float
    G_H: float
    a_split: float
    Y0: float
    T: float

    @property
    def fbm_scale(self) -> float:
        """2^{1/(2 alpha)}, the weight of the fBm inside the linear trace"""
        return 2.0 ** (1.0 / (2.0 * self.alpha))

    def as_dict(self):
        return {
            'H': self.H,
            'alpha': self.alpha,
            'K': self.K,
            'kappa_H': self.kappa_H,
            'c_alpha': self.c_alpha,
            'G_H': self.G_H,
            'a_split': self.a_split,
            'Y0': self.Y0,
            'T': self.T,
        }


@dataclass(frozen=True)
class DriftPair:
    """
    The drift g of the differential equation and the rescaled coefficient f
    of the heat equation, f(x) = 2^H / (kappa_H^2 sqrt 2) * g(x).
    """

    g: Callable
    f: Callable
    lip_g: float
    scale: float
    name: str = "custom"
    # set when f is a known constant; the simulator then skips the FFT projection
    constant_f: Optional[float] = None

    def f_values(self, x):
        """Vectorized f, broadcasting scalar-valued callables"""
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.f(x), dtype=float), x.shape)

    def g_values(self, x):
        """Vectorized g, broadcasting scalar-valued callables"""
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.g(x), dtype=float), x.shape)
