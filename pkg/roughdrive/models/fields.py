"""
Covariance specifications for the Gaussian processes of the construction
"""
from dataclasses import dataclass, field

from roughdrive.errors import DomainError

COV_KINDS = ('fbm', 'bifbm', 'xi', 'v_trace', 'r_smooth')

_REQUIRED = {
    'fbm': ('H',),
    'bifbm': ('H', 'K'),
    'xi': ('K',),
    'v_trace': ('alpha', 'c_alpha'),
    'r_smooth': ('H', 'c_alpha'),
}


@dataclass(frozen=True)
class CovSpec:
    """One covariance kind plus the parameters it needs"""

    kind: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in COV_KINDS:
            raise DomainError(f"unknown covariance kind {self.kind!r}; expected one of {COV_KINDS}")
        missing = [name for name in _REQUIRED[self.kind] if name not in self.parameters]
        if missing:
            raise DomainError(f"{self.kind} covariance needs parameters {missing}")
        H = self.parameters.get('H')
        K = self.parameters.get('K')
        if H is not None and not 0.0 < H < 1.0:
            raise DomainError(f"H={H} must lie in (0, 1)")
        if K is not None and not 0.0 < K <= 1.0:
            raise DomainError(f"K={K} must lie in (0, 1]")
        if self.kind == 'xi' and not K < 1.0:
            raise DomainError(f"xi covariance needs K in (0, 1), got {K}")

    @classmethod
    def from_params(cls, kind, params):
        """Spec for a kind using the constants of a ModelParams"""
        values = {
            'fbm': {'H': params.H},
            'bifbm': {'H': 0.5, 'K': params.K},
            'xi': {'K': params.K},
            'v_trace': {'alpha': params.alpha, 'c_alpha': params.c_alpha},
            'r_smooth': {'H': params.H, 'c_alpha': params.c_alpha},
        }
        return cls(kind, values[kind])
