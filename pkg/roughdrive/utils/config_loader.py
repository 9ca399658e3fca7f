"""
Config loader - JSON run configurations with environment defaults
"""
import json
import logging
import math
import os

import numpy as np
from dotenv import load_dotenv

from roughdrive.errors import ConfigError
from roughdrive.models.run import EXPERIMENT_NAMES, G_SPEC_KINDS, RunConfig
from roughdrive.services.params import alpha_from_hurst, correction_exponent, dalang_condition

logger = logging.getLogger(__name__)

ENV_OUTPUT_DIR = 'ROUGHDRIVE_OUTPUT_DIR'
ENV_WORKERS = 'ROUGHDRIVE_WORKERS'
SEED_MAX = 2 ** 64
CELL_FACTOR = 16.0

_KNOWN_KEYS = set(RunConfig.__dataclass_fields__)


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def parse_g_spec(spec):
    """Split 'kind[:value]' into (kind, value); raises ValueError on a malformed spec"""
    kind, _, raw = str(spec).partition(':')
    if kind not in G_SPEC_KINDS:
        raise ValueError(f"g_spec kind {kind!r} is not one of {G_SPEC_KINDS}")
    if kind in ('const', 'f-const', 'linear'):
        if not raw:
            raise ValueError(f"g_spec {spec!r} needs a value, e.g. {kind}:1")
        return kind, float(raw)
    if raw:
        raise ValueError(f"g_spec {spec!r} takes no value")
    return kind, None


def _validate_table(table, violations):
    if not isinstance(table, dict) or 'x' not in table or 'y' not in table:
        violations.append("custom-table needs g_table with 'x' and 'y' arrays")
        return
    x = np.asarray(table['x'], dtype=float)
    y = np.asarray(table['y'], dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size < 2:
        violations.append("g_table 'x' and 'y' must be equal-length arrays with at least 2 points")
    elif np.any(np.diff(x) <= 0) or not np.all(np.isfinite(y)):
        violations.append("g_table 'x' must be strictly increasing and 'y' finite")


def validate(raw):
    """Every violation in a raw config mapping, as readable messages naming the field"""
    violations = [f"unknown field {key!r}" for key in sorted(set(raw) - _KNOWN_KEYS)]

    if 'seed' not in raw:
        violations.append("seed is required (seeds are mandatory for reproducibility)")
    elif not _is_int(raw['seed']) or not 0 <= raw['seed'] < SEED_MAX:
        violations.append(f"seed={raw['seed']!r} must be an integer in [0, 2^64)")

    H = raw.get('H')
    H_ok = False
    if H is None:
        violations.append("H is required")
    elif not _is_number(H) or not 0 < H <= 0.25:
        violations.append(
            f"H={H!r} violates Dalang's condition 1 < alpha <= 2 (H must lie in (0, 1/4])"
        )
    else:
        H_ok = dalang_condition(alpha_from_hurst(H))

    for key in ('T', 'L', 'dt', 'delta'):
        if key in raw and not (_is_number(raw[key]) and raw[key] > 0):
            violations.append(f"{key}={raw[key]!r} must be a positive number")
    if 'Y0' in raw and not _is_number(raw['Y0']):
        violations.append(f"Y0={raw['Y0']!r} must be a finite number")
    for key in ('n_replicas', 'record_every', 'workers', 'block_size'):
        if key in raw and not (_is_int(raw[key]) and raw[key] >= 1):
            violations.append(f"{key}={raw[key]!r} must be a positive integer")

    N = raw.get('N', RunConfig.N)
    if not _is_int(N) or N < 64 or N & (N - 1):
        violations.append(f"N={N!r} must be a power of 2 and >= 64")

    resolution = raw.get('kernel_resolution', RunConfig.kernel_resolution)
    if not _is_int(resolution) or resolution < 3 or resolution % 2 == 0:
        violations.append(f"kernel_resolution={resolution!r} must be an odd integer >= 3")

    T = raw.get('T', RunConfig.T)
    dt = raw.get('dt', RunConfig.dt)
    record_every = raw.get('record_every', RunConfig.record_every)
    if _is_number(T) and _is_number(dt) and T > 0 and dt > 0:
        n_steps = round(T / dt)
        if n_steps < 1 or not math.isclose(n_steps * dt, T, rel_tol=1e-9):
            violations.append(f"T={T} must be an integer multiple of dt={dt}")
        elif _is_int(record_every) and record_every >= 1 and n_steps % record_every:
            violations.append(f"T/dt={n_steps} steps is not a multiple of record_every={record_every}")
        L = raw.get('L', RunConfig.L)
        if H_ok and _is_number(L):
            needed = CELL_FACTOR * T ** (1.0 / alpha_from_hurst(H))
            if L < needed:
                violations.append(f"L={L} is below 16 T^(1/alpha) = {needed:.4g}")

    try:
        kind, _ = parse_g_spec(raw.get('g_spec', RunConfig.g_spec))
        if kind == 'custom-table':
            _validate_table(raw.get('g_table'), violations)
    except ValueError as e:
        violations.append(f"g_spec: {e}")

    experiments = raw.get('experiments', list(RunConfig.experiments))
    if not isinstance(experiments, (list, tuple)) or not experiments:
        violations.append("experiments must be a non-empty list")
    else:
        unknown = [name for name in experiments if name not in EXPERIMENT_NAMES]
        if unknown:
            violations.append(f"unknown experiments {unknown}; registered: {list(EXPERIMENT_NAMES)}")

    if H_ok:
        b = raw.get('b_exponent')
        upper = correction_exponent(H)
        if b is not None and not (_is_number(b) and H < b < upper):
            violations.append(f"b_exponent={b!r} must lie strictly between H={H} and G_H={upper:.6f}")
        t_probe = raw.get('t_probe')
        if t_probe is not None and _is_number(T) and not (_is_number(t_probe) and T / 2 <= t_probe < T):
            violations.append(f"t_probe={t_probe!r} must lie in [T/2, T)")

    return violations


def _env_defaults():
    load_dotenv()
    defaults = {}
    if os.getenv(ENV_OUTPUT_DIR):
        defaults['output_dir'] = os.getenv(ENV_OUTPUT_DIR)
    workers = os.getenv(ENV_WORKERS)
    if workers:
        try:
            defaults['workers'] = int(workers)
        except ValueError:
            raise ConfigError([f"{ENV_WORKERS}={workers!r} must be an integer"])
    else:
        defaults['workers'] = os.cpu_count() or 1
    return defaults


def config_from_mapping(raw, overrides=None):
    """Validate a mapping (file values, then overrides) into a RunConfig"""
    merged = {**_env_defaults(), **raw, **{k: v for k, v in (overrides or {}).items() if v is not None}}
    violations = validate(merged)
    if violations:
        raise ConfigError(violations)
    if 'experiments' in merged:
        merged['experiments'] = tuple(merged['experiments'])
    for key in ('H', 'Y0', 'T', 'L', 'dt', 'delta'):
        if key in merged:
            merged[key] = float(merged[key])
    return RunConfig(**merged)


def load_config(path, overrides=None):
    """Load and validate a JSON run configuration; ConfigError lists every violation"""
    try:
        with open(path) as f:
            raw = json.load(f)
    except FileNotFoundError:
        raise ConfigError([f"config file {path} not found"])
    except json.JSONDecodeError as e:
        raise ConfigError([f"config file {path} is not valid JSON: {e}"])
    if not isinstance(raw, dict):
        raise ConfigError([f"config file {path} must hold a JSON object"])
    config = config_from_mapping(raw, overrides)
    logger.info("loaded config %s (H=%s, seed=%s)", path, config.H, config.seed)
    return config
