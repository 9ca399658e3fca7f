"""
Time grids and replica path samples
"""
from dataclasses import dataclass

import numpy as np

from roughdrive.errors import ContractError


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing sample times in [0, T]"""

    points: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=float).ravel()
        if points.size == 0:
            raise ContractError("time grid needs at least one point")
        if points[0] < 0:
            raise ContractError(f"time grid starts at {points[0]} < 0")
        if np.any(np.diff(points) <= 0):
            raise ContractError("time grid must be strictly increasing")
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)

    @classmethod
    def uniform(cls, T, n, include_zero=True):
        """n points with spacing T/n (or T/(n-1) from zero)"""
        if include_zero:
            return cls(np.linspace(0.0, T, n))
        return cls(T * np.arange(1, n + 1) / n)

    @property
    def n(self):
        return self.points.size

    def __len__(self):
        return self.points.size

    def same_as(self, other):
        return self.n == other.n and np.array_equal(self.points, other.points)

    def index_of(self, t, rtol=1e-9):
        """Index of the grid point equal to t (within rtol of the grid span)"""
        idx = int(np.argmin(np.abs(self.points - t)))
        span = max(self.points[-1], 1.0)
        if abs(self.points[idx] - t) > rtol * span:
            raise ContractError(f"time {t} is not a grid point")
        return idx


@dataclass(frozen=True, eq=False)
class PathSample:
    """Replica time series on a common grid, with the seed that generated them"""

    grid: TimeGrid
    replicas: np.ndarray
    seed: int
    label: str = ""

    def __post_init__(self):
        replicas = np.asarray(self.replicas, dtype=float)
        if replicas.ndim != 2 or replicas.shape[0] < 1:
            raise ContractError(f"replicas must be a non-empty 2-D array, got shape {replicas.shape}")
        if replicas.shape[1] != self.grid.n:
            raise ContractError(
                f"replica length {replicas.shape[1]} does not match grid size {self.grid.n}"
            )
        object.__setattr__(self, 'replicas', replicas)

    @property
    def n_replicas(self):
        return self.replicas.shape[0]

    def at(self, t):
        """Column of values at time t"""
        return self.replicas[:, self.grid.index_of(t)]

    def increments(self, t, eps):
        """Per-replica increment over [t, t + eps]"""
        return self.at(t + eps) - self.at(t)
