"""
Run configuration and run manifest
"""
from dataclasses import asdict, dataclass, field
from typing import Optional

from roughdrive.errors import ExitCode
from roughdrive.models.simulation import GridConfig

# declaration order is execution order
EXPERIMENT_NAMES = (
    'constant-identities',
    'kernel-identities',
    'cov-decomposition',
    'linear-law',
    'fbm-increments',
    'holder-slope',
    'correction-rate',
    'weak-solution',
    'moment-bound',
)
# moment-bound repeats the simulation at two finer steps, so it is opt-in
DEFAULT_EXPERIMENTS = EXPERIMENT_NAMES[:-1]
G_SPEC_KINDS = ('const', 'f-const', 'sin', 'linear', 'custom-table')


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration; build it through load_config"""

    H: float
    seed: int
    g_spec: str = 'sin'
    # Y0 = 0 is a fixed point of the default sin drift
    Y0: float = 1.0
    T: float = 1.0
    L: float = 16.0
    N: int = 2048
    dt: float = 2.0 ** -12
    n_replicas: int = 10_000
    experiments: tuple = DEFAULT_EXPERIMENTS
    output_dir: str = 'output_dir'
    record_every: int = 4
    workers: int = 1
    block_size: int = 64
    delta: float = 0.5
    b_exponent: Optional[float] = None
    t_probe: Optional[float] = None
    kernel_resolution: int = 10_001
    g_table: Optional[dict] = None
    dump_traces: bool = False

    def grid_config(self):
        return GridConfig.from_horizon(self.L, self.N, self.dt, self.T, self.record_every)

    def as_dict(self):
        record = asdict(self)
        record['experiments'] = list(self.experiments)
        return record

    def hashed_fields(self):
        """Everything that determines the numbers; output location and threading excluded"""
        record = self.as_dict()
        for key in ('output_dir', 'workers', 'dump_traces'):
            record.pop(key)
        return record


@dataclass
class ExperimentResult:
    """Outcome of one registered experiment"""

    name: str
    passed: bool
    seconds: float
    reports: list = field(default_factory=list)
    error: Optional[str] = None
    artifacts: list = field(default_factory=list)

    def as_record(self):
        return {
            'name': self.name,
            'passed': self.passed,
            'seconds': round(self.seconds, 3),
            'error': self.error,
            'artifacts': list(self.artifacts),
            'reports': [{'label': label, **report.as_record()} for label, report in self.reports],
        }


@dataclass
class RunManifest:
    """Everything needed to audit and reproduce a run"""

    config: dict
    config_hash: str
    params: dict
    results: list
    artifacts: list
    wall_clock_seconds: float
    tool_version: str
    system: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    @property
    def exit_code(self):
        return ExitCode.PASS if self.passed else ExitCode.EXPERIMENT_FAILURE

    def as_record(self):
        return {
            'tool_version': self.tool_version,
            'config_hash': self.config_hash,
            'config': self.config,
            'params': self.params,
            'passed': self.passed,
            'experiments': [r.as_record() for r in self.results],
            'artifacts': list(self.artifacts),
            'wall_clock_seconds': round(self.wall_clock_seconds, 3),
            'system': self.system,
        }
