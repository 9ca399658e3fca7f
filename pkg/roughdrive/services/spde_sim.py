"""
Spectral Galerkin simulation of the fractional stochastic heat equation on a
periodic cell [0, L), for the linear equation (v) and the nonlinear equation
with multiplicative coefficient f(c_alpha u) (u), both driven by the same
white-noise realization.

Mode j of the field evolves under -lambda_j with lambda_j = |2 pi j / L|^alpha / 2.
The linear part is integrated exactly and the noise coefficient is frozen at
the start of each step (exponential Euler). With f constant this reproduces
the exact Ornstein-Uhlenbeck transition of every mode.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from roughdrive.errors import ContractError, DomainError, NumericError
from roughdrive.models.paths import PathSample
from roughdrive.models.simulation import CoupledTrace, SpectralState, trace_weights
from roughdrive.services import rng
from roughdrive.services.fields import sample_xi
from roughdrive.utils.file_utils import write_csv

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_SIZE = 64
# steps of normals drawn per replica at once
STEP_CHUNK = 32
MIN_CELL_FACTOR = 16.0


def eigenvalues(N, L, alpha):
    """lambda_j = |2 pi j / L|^alpha / 2 for the rfft modes j = 0..N/2"""
    j = np.arange(N // 2 + 1, dtype=float)
    return np.abs(2.0 * np.pi * j / L) ** alpha / 2.0


def _gains(lam, dt):
    """sqrt((1 - e^{-2 lambda dt}) / (2 lambda dt)), equal to 1 for lambda = 0"""
    gain = np.ones_like(lam)
    pos = lam > 0
    x = 2.0 * lam[pos] * dt
    gain[pos] = np.sqrt(-np.expm1(-x) / x)
    return gain


def _increments_from_normals(z, L, dt):
    """Map N standard normals per step onto the N/2+1 rfft noise modes"""
    n = z.shape[-1]
    dw = np.empty(z.shape[:-1] + (n // 2 + 1,), dtype=complex)
    real_sd = np.sqrt(dt / L)
    half_sd = np.sqrt(dt / (2.0 * L))
    dw[..., 0] = real_sd * z[..., 0]
    dw[..., -1] = real_sd * z[..., 1]
    dw[..., 1:-1] = half_sd * (z[..., 2::2] + 1j * z[..., 3::2])
    return dw


def _check_points(N):
    if N < 4 or N % rng.WORDS_PER_COUNTER:
        raise ContractError(f"N={N} must be a multiple of {rng.WORDS_PER_COUNTER}")


def noise_increment(N, L, dt, seed, step, replica):
    """
    White-noise increment over one step, rfft layout of length N/2+1.

    Modes 0 and N/2 are real with variance dt/L; the others are complex with
    E|dW_j|^2 = dt/L. Step k of a replica consumes normals k*N .. k*N+N-1
    of its 'noise' stream.
    """
    if not dt > 0:
        raise DomainError(f"dt={dt} must be positive")
    _check_points(N)
    generator = rng.replica_stream(seed, 'noise', replica, offset=step * N)
    return _increments_from_normals(rng.standard_normals(generator, N), L, dt)


def check_cell(grid_cfg, params):
    """Warn when the periodic cell is smaller than 16 T^{1/alpha}"""
    needed = MIN_CELL_FACTOR * grid_cfg.T ** (1.0 / params.alpha)
    if grid_cfg.L < needed:
        logger.warning(
            "periodic cell L=%.4g is below %.4g; stable-kernel tails will wrap around",
            grid_cfg.L, needed,
        )
        return False
    return True


def _forcing(drift, params, state, dw):
    """Projection of f(c_alpha u) dW onto the retained modes"""
    if drift.constant_f is not None:
        return drift.constant_f * dw
    N = state.N
    m = drift.f_values(params.c_alpha * (params.Y0 + state.field()))
    if np.all(m == m[:, :1]):
        return m[:, :1] * dw
    noise = N * np.fft.irfft(dw, n=N, axis=-1)
    return np.fft.rfft(m * noise, axis=-1) / N


def _integrate_block(grid_cfg, params, drift, seed, replicas, linear=True, noise_scale=1.0):
    """
    Time-step one block of replicas.

    Returns (v, u) record arrays of shape (len(replicas), n_records); v is
    None when linear is False and u is None when drift is None.
    """
    N, dt = grid_cfg.N, grid_cfg.dt
    lam = eigenvalues(N, grid_cfg.L, params.alpha)
    decay = np.exp(-lam * dt)
    gain = _gains(lam, dt)
    n_rec = grid_cfg.record_steps.size
    B = len(replicas)

    generators = [rng.replica_stream(seed, 'noise', r) for r in replicas]
    v_state = SpectralState.zeros(B, lam) if linear else None
    u_state = SpectralState.zeros(B, lam) if drift is not None else None
    v_rec = np.zeros((B, n_rec)) if linear else None
    u_rec = np.full((B, n_rec), params.Y0) if drift is not None else None

    step = 0
    while step < grid_cfg.n_steps:
        chunk = min(STEP_CHUNK, grid_cfg.n_steps - step)
        z = rng.fill_standard_normals(generators, np.empty((B, chunk, N)))
        increments = _increments_from_normals(z, grid_cfg.L, dt)
        if noise_scale != 1.0:
            increments *= noise_scale
        for k in range(chunk):
            dw = increments[:, k, :]
            if u_state is not None:
                with np.errstate(over='ignore', invalid='ignore'):
                    u_state.advance(decay, gain, _forcing(drift, params, u_state, dw))
                if not np.all(np.isfinite(u_state.modes)):
                    raise NumericError(
                        f"non-finite field at step {step + 1}",
                        {'step': step + 1, 'replicas': [int(replicas[0]), int(replicas[-1])]},
                    )
            if v_state is not None:
                v_state.advance(decay, gain, dw)
            step += 1
            if step % grid_cfg.record_every == 0:
                idx = step // grid_cfg.record_every
                if v_state is not None:
                    v_rec[:, idx] = v_state.trace_at_origin()
                if u_state is not None:
                    u_rec[:, idx] = params.Y0 + u_state.trace_at_origin()
    return v_rec, u_rec


def _run_blocks(grid_cfg, params, drift, seed, n_replicas, linear, noise_scale, workers, block_size):
    if n_replicas < 1:
        raise ContractError(f"n_replicas={n_replicas} must be >= 1")
    check_cell(grid_cfg, params)
    blocks = [np.arange(start, min(start + block_size, n_replicas))
              for start in range(0, n_replicas, block_size)]
    logger.info(
        "simulating %d replicas in %d blocks (N=%d, steps=%d, workers=%d)",
        n_replicas, len(blocks), grid_cfg.N, grid_cfg.n_steps, workers,
    )

    def job(replicas):
        return _integrate_block(grid_cfg, params, drift, seed, replicas, linear, noise_scale)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, blocks))
    else:
        results = [job(b) for b in blocks]

    v = np.concatenate([r[0] for r in results]) if linear else None
    u = np.concatenate([r[1] for r in results]) if drift is not None else None
    return v, u


def simulate_linear(grid_cfg, params, seed, n_replicas, noise_scale=1.0,
                    workers=1, block_size=DEFAULT_BLOCK_SIZE):
    """v_t(0) on the record times, v_0 = 0"""
    v, _ = _run_blocks(grid_cfg, params, None, seed, n_replicas, True, noise_scale, workers, block_size)
    return PathSample(grid=grid_cfg.time_grid(), replicas=v, seed=int(seed), label="v")


def simulate_nonlinear(grid_cfg, params, drift, seed, n_replicas,
                       workers=1, block_size=DEFAULT_BLOCK_SIZE):
    """u_t(0) on the record times, u_0 = Y0"""
    _, u = _run_blocks(grid_cfg, params, drift, seed, n_replicas, False, 1.0, workers, block_size)
    return PathSample(grid=grid_cfg.time_grid(), replicas=u, seed=int(seed), label="u")


def simulate_coupled(grid_cfg, params, drift, seed, n_replicas,
                     workers=1, block_size=DEFAULT_BLOCK_SIZE):
    """Linear and nonlinear runs on shared noise, plus xi from the 'xi' stream"""
    v, u = _run_blocks(grid_cfg, params, drift, seed, n_replicas, True, 1.0, workers, block_size)
    grid = grid_cfg.time_grid()
    xi = sample_xi(params, grid, seed, n_replicas)
    return CoupledTrace(
        grid_cfg=grid_cfg,
        u0_trace=PathSample(grid=grid, replicas=u, seed=int(seed), label="u"),
        v0_trace=PathSample(grid=grid, replicas=v, seed=int(seed), label="v"),
        xi_path=xi,
        seed=int(seed),
        params=params,
    )


def discrete_cov_v_trace(grid_cfg, params, s, t):
    """
    Exact covariance of the simulated v_t(0).

    Every mode is an Ornstein-Uhlenbeck process sampled exactly at the step
    times, so the only error against cov_v_trace is truncation and periodization.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s < 0) or np.any(t < 0):
        raise DomainError("covariance arguments must be non-negative times")
    L = grid_cfg.L
    lam = eigenvalues(grid_cfg.N, L, params.alpha)[1:]
    weights = trace_weights(grid_cfg.N)[1:]
    lo = np.minimum(s, t)
    gap = np.abs(t - s)
    total = lo / L
    for lam_j, w_j in zip(lam, weights):
        total = total + w_j * np.exp(-lam_j * gap) * -np.expm1(-2.0 * lam_j * lo) / (2.0 * lam_j * L)
    return total if np.ndim(total) else float(total)


def dump_traces(trace, path):
    """CSV with one row per (replica, record time)"""
    times = trace.grid.points

    def rows():
        for r in range(trace.n_replicas):
            u, v, xi = trace.u0_trace.replicas[r], trace.v0_trace.replicas[r], trace.xi_path.replicas[r]
            for i, t in enumerate(times):
                yield r, float(t), float(u[i]), float(v[i]), float(xi[i])

    write_csv(path, ['replica', 't', 'u0', 'v0', 'xi'], rows(), comments=[f"seed={trace.seed}"])
    return path
