"""
Spectral grid configuration, Fourier state and coupled trace records
"""
import math
from dataclasses import dataclass

import numpy as np

from roughdrive.errors import ConfigError, ContractError
from roughdrive.models.paths import PathSample, TimeGrid

MIN_POINTS = 64
# tolerated |imag| of the self-conjugate modes
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class GridConfig:
    """
    Periodic cell [0, L) with N points, n_steps steps of size dt.

    Traces are recorded every record_every steps, starting at t = 0.
    """

    L: float
    N: int
    dt: float
    n_steps: int
    record_every: int = 4

    def __post_init__(self):
        violations = []
        if not self.L > 0:
            violations.append(f"L={self.L} must be positive")
        if not isinstance(self.N, int) or self.N < MIN_POINTS or self.N & (self.N - 1):
            violations.append(f"N={self.N} must be a power of 2 and >= {MIN_POINTS}")
        if not self.dt > 0:
            violations.append(f"dt={self.dt} must be positive")
        if not isinstance(self.n_steps, int) or self.n_steps < 1:
            violations.append(f"n_steps={self.n_steps} must be a positive integer")
        if not isinstance(self.record_every, int) or self.record_every < 1:
            violations.append(f"record_every={self.record_every} must be a positive integer")
        elif isinstance(self.n_steps, int) and self.n_steps % self.record_every:
            violations.append(f"n_steps={self.n_steps} is not a multiple of record_every={self.record_every}")
        if violations:
            raise ConfigError(violations)

    @classmethod
    def from_horizon(cls, L, N, dt, T, record_every=4):
        """Grid whose n_steps * dt equals T"""
        n_steps = int(round(T / dt))
        if n_steps < 1 or not math.isclose(n_steps * dt, T, rel_tol=1e-9):
            raise ConfigError([f"T={T} is not an integer multiple of dt={dt}"])
        return cls(L=float(L), N=int(N), dt=float(dt), n_steps=n_steps, record_every=int(record_every))

    @property
    def T(self):
        return self.n_steps * self.dt

    @property
    def n_modes(self):
        return self.N // 2 + 1

    @property
    def record_spacing(self):
        return self.record_every * self.dt

    @property
    def record_steps(self):
        return np.arange(0, self.n_steps + 1, self.record_every)

    @property
    def record_times(self):
        return self.record_steps * self.dt

    def time_grid(self):
        return TimeGrid(self.record_times)

    def as_dict(self):
        return {
            'L': self.L,
            'N': self.N,
            'dt': self.dt,
            'n_steps': self.n_steps,
            'record_every': self.record_every,
        }


def trace_weights(N):
    """Weights turning rfft-layout coefficients into the field value at x = 0"""
    weights = np.full(N // 2 + 1, 2.0)
    weights[0] = weights[-1] = 1.0
    return weights


@dataclass
class SpectralState:
    """
    Fourier coefficients in rfft layout for a block of replicas.

    The physical field is N * irfft(modes), so modes[..., j] is the
    coefficient of exp(2 pi i j x / L).
    """

    modes: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self):
        self.modes = np.atleast_2d(np.asarray(self.modes, dtype=complex))
        if self.modes.shape[-1] != self.eigenvalues.shape[-1]:
            raise ContractError("modes and eigenvalues have different lengths")

    @classmethod
    def zeros(cls, n_replicas, eigenvalues):
        return cls(np.zeros((n_replicas, eigenvalues.size), dtype=complex), eigenvalues)

    @property
    def N(self):
        return 2 * (self.modes.shape[-1] - 1)

    def field(self):
        """Real field on the N grid points"""
        return self.N * np.fft.irfft(self.modes, n=self.N, axis=-1)

    def trace_at_origin(self):
        """Field value at grid point 0"""
        return (self.modes.real * trace_weights(self.N)).sum(axis=-1)

    def hermitian_residual(self):
        """Largest imaginary part of the self-conjugate modes 0 and N/2"""
        return float(max(np.max(np.abs(self.modes[..., 0].imag)),
                         np.max(np.abs(self.modes[..., -1].imag))))

    def is_hermitian(self):
        return self.hermitian_residual() <= HERMITIAN_TOL

    def advance(self, decay, gain, forcing):
        """Exponential-Euler update modes <- decay * modes + gain * forcing"""
        self.modes *= decay
        self.modes += gain * forcing
        return self


@dataclass(frozen=True, eq=False)
class CoupledTrace:
    """u_t(0), v_t(0) and xi on the record times, driven by one noise realization"""

    grid_cfg: GridConfig
    u0_trace: PathSample
    v0_trace: PathSample
    xi_path: PathSample
    seed: int
    params: object
    coupled: bool = True

    def __post_init__(self):
        grid = self.u0_trace.grid
        if not (grid.same_as(self.v0_trace.grid) and grid.same_as(self.xi_path.grid)):
            raise ContractError("u, v and xi traces must share the record times")
        counts = {self.u0_trace.n_replicas, self.v0_trace.n_replicas, self.xi_path.n_replicas}
        if len(counts) != 1:
            raise ContractError(f"u, v and xi traces have different replica counts {sorted(counts)}")

    @property
    def n_replicas(self):
        return self.u0_trace.n_replicas

    @property
    def grid(self):
        return self.u0_trace.grid
