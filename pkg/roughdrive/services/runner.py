"""
Experiment orchestration: registry, shared simulation, artifacts and manifest
"""
import logging
import os
import time
from dataclasses import replace
from fractions import Fraction

import numpy as np

from roughdrive import __version__
from roughdrive.errors import RoughDriveError
from roughdrive.models.metrics import RunMetrics
from roughdrive.models.paths import TimeGrid
from roughdrive.models.run import ExperimentResult, RunManifest
from roughdrive.services import experiments, fields, spde_sim
from roughdrive.services.params import (
    constant_drift_pair, derive_params, estimate_lipschitz, make_drift_pair,
)
from roughdrive.utils.config_loader import parse_g_spec
from roughdrive.utils.file_utils import (
    ensure_output_folder, get_config_hash, write_csv, write_json, write_plot_data,
)

logger = logging.getLogger(__name__)

KERNEL_ALPHAS = (2.0, float(Fraction(5, 3)))
DECOMPOSITION_POINTS = 20


def build_drift(config, params):
    """DriftPair for the config's g_spec"""
    kind, value = parse_g_spec(config.g_spec)
    if kind == 'const':
        return constant_drift_pair(value, params, of='g')
    if kind == 'f-const':
        return constant_drift_pair(value, params, of='f')
    if kind == 'sin':
        return make_drift_pair(np.sin, params, lip_g=1.0, name='sin')
    if kind == 'linear':
        slope = value
        return make_drift_pair(lambda x: slope * np.asarray(x, dtype=float), params,
                               lip_g=abs(slope), name=config.g_spec)

    xs = np.asarray(config.g_table['x'], dtype=float)
    ys = np.asarray(config.g_table['y'], dtype=float)

    def g(x):
        return np.interp(x, xs, ys)

    return make_drift_pair(g, params, lip_g=estimate_lipschitz(g, (xs[0], xs[-1])), name='custom-table')


class RunContext:
    """Derived objects of one run; the coupled simulation is computed at most once"""

    def __init__(self, config):
        self.config = config
        self.params = derive_params(config.H, Y0=config.Y0, T=config.T)
        self.drift = build_drift(config, self.params)
        self.grid_cfg = config.grid_config()
        self.config_hash = get_config_hash(config.hashed_fields())
        self._traces = None

    def traces(self):
        if self._traces is None:
            c = self.config
            self._traces = spde_sim.simulate_coupled(
                self.grid_cfg, self.params, self.drift, c.seed, c.n_replicas,
                workers=c.workers, block_size=c.block_size,
            )
        return self._traces


def _constant_identities(ctx):
    return [('all', experiments.verify_constant_identities(ctx.config.seed))]


def _kernel_identities(ctx):
    alphas = list(KERNEL_ALPHAS)
    if all(abs(ctx.params.alpha - a) > 1e-12 for a in alphas):
        alphas.append(ctx.params.alpha)
    return [(f"alpha={a:.6g}", experiments.verify_kernel_identities(a, ctx.config.kernel_resolution))
            for a in alphas]


def _cov_decomposition(ctx):
    T = ctx.config.T
    grid = TimeGrid(np.linspace(T / DECOMPOSITION_POINTS, T, DECOMPOSITION_POINTS))
    return [(f"H={ctx.params.H:g}", experiments.verify_cov_decomposition(ctx.params.H, grid))]


def _linear_law(ctx):
    v = ctx.traces().v0_trace
    return [('v', experiments.verify_linear_law(v, ctx.params, ctx.grid_cfg))]


def _fbm_increments(ctx):
    traces = ctx.traces()
    X = fields.extract_fbm(traces.v0_trace, traces.xi_path, ctx.params)
    return [('X', experiments.estimate_fbm_increments(X, ctx.params.H, t_probe=ctx.config.t_probe))]


def _scaled_trace_oracle(ctx, factor):
    def oracle(s, t):
        return factor ** 2 * spde_sim.discrete_cov_v_trace(ctx.grid_cfg, ctx.params, s, t)
    return oracle


def _holder_slope(ctx):
    f_const = ctx.drift.constant_f
    # u - Y0 = f v exactly when f is constant
    oracle = None if f_const is None else _scaled_trace_oracle(ctx, f_const)
    u = ctx.traces().u0_trace
    return [('u', experiments.estimate_holder_slope(u, ctx.params, t_probe=ctx.config.t_probe,
                                                    oracle_cov=oracle))]


def _correction_rate(ctx):
    return [('D', experiments.estimate_correction_rate(ctx.traces(), ctx.drift, t_probe=ctx.config.t_probe))]


def _weak_solution(ctx):
    c = ctx.config
    report = experiments.verify_weak_solution(
        ctx.traces(), ctx.drift, ctx.params, delta=c.delta, b_exponent=c.b_exponent, t_probe=c.t_probe,
    )
    return [('Y', report)]


def _moment_bound(ctx):
    c = ctx.config
    report = experiments.estimate_moment_bound(
        ctx.grid_cfg, ctx.params, ctx.drift, c.seed, c.n_replicas, workers=c.workers, block_size=c.block_size,
    )
    return [('u', report)]


EXPERIMENTS = {
    'constant-identities': _constant_identities,
    'kernel-identities': _kernel_identities,
    'cov-decomposition': _cov_decomposition,
    'linear-law': _linear_law,
    'fbm-increments': _fbm_increments,
    'holder-slope': _holder_slope,
    'correction-rate': _correction_rate,
    'weak-solution': _weak_solution,
    'moment-bound': _moment_bound,
}


def _write_artifacts(name, reports, ctx, output_dir):
    """<name>.csv with all reports, <name>.plot.dat from the first report with plot points"""
    paths = []
    header = ['label', *reports[0][1].csv_header]
    rows = [(label, *row) for label, report in reports for row in report.rows()]
    comments = [f"experiment={name}", f"config_hash={ctx.config_hash}", f"seed={ctx.config.seed}"]
    paths.append(write_csv(os.path.join(output_dir, f"{name}.csv"), header, rows, comments))
    for _, report in reports:
        xs, ys = report.plot_points()
        if len(xs):
            paths.append(write_plot_data(os.path.join(output_dir, f"{name}.plot.dat"), xs, ys))
            break
    return paths


def run_experiment(name, ctx, output_dir, metrics):
    """Run one registered experiment; library errors become a failed result"""
    logger.info("experiment %s started", name)
    start = time.perf_counter()
    try:
        reports = [(label, replace(report, config_hash=ctx.config_hash))
                   for label, report in EXPERIMENTS[name](ctx)]
        passed = all(report.passed for _, report in reports)
        error = None
    except RoughDriveError as e:
        logger.error("experiment %s failed: %s", name, e)
        reports, passed, error = [], False, f"{type(e).__name__}: {e}"
    seconds = time.perf_counter() - start

    result = ExperimentResult(name=name, passed=passed, seconds=seconds, reports=reports, error=error)
    if reports:
        result.artifacts = _write_artifacts(name, reports, ctx, output_dir)
        for path in result.artifacts:
            metrics.record_artifact(path)
    metrics.record_experiment(passed=passed, seconds=seconds)
    logger.info("experiment %s finished in %.2fs: %s", name, seconds, "PASS" if passed else "FAIL")
    return result


def run(config, printer=None):
    """
    Execute the configured experiments in declaration order and write
    manifest.json, <experiment>.csv and <experiment>.plot.dat.
    """
    start = time.perf_counter()
    metrics = RunMetrics()
    ctx = RunContext(config)
    output_dir = ensure_output_folder(config.output_dir)
    logger.info("run %s: %d experiments into %s", ctx.config_hash, len(config.experiments), output_dir)

    ordered = list(dict.fromkeys(config.experiments))
    results = []
    for name in ordered:
        result = run_experiment(name, ctx, output_dir, metrics)
        results.append(result)
        if printer is not None:
            printer.print_experiment(result)

    if config.dump_traces:
        path = spde_sim.dump_traces(ctx.traces(), os.path.join(output_dir, 'traces.csv'))
        metrics.record_artifact(path)

    manifest_path = os.path.join(output_dir, 'manifest.json')
    manifest = RunManifest(
        config=config.as_dict(),
        config_hash=ctx.config_hash,
        params=ctx.params.as_dict(),
        results=results,
        artifacts=list(metrics.artifacts) + [manifest_path],
        wall_clock_seconds=time.perf_counter() - start,
        tool_version=__version__,
        system=metrics.get_metrics(),
    )
    write_json(manifest_path, manifest.as_record())
    return manifest
