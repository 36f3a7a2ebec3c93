"""Force-noise model and the Monte Carlo overlap oracle.

The compensating force is perturbed multiplicatively, f -> f(t)(1 + lam*xi),
with xi white and independent between branches.  Discretized white noise is
i.i.d. Gaussian with variance gamma/dt, held constant within each step; in
the dt -> 0 limit this piecewise-constant (Stratonovich / midpoint) reading
reproduces the half-delta equal-time convention of the perturbative formula.

Because the perturbation stays linear in x, each branch remains an exactly
Gaussian displaced number state: per realization it is enough to integrate
the classical centroid and action (fast path, the compiled kernel) and to
combine the two branches with the closed-form displaced-state overlap.  The
split-step integrator in pde.py cross-checks this without any Gaussian
assumption.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels, pde
from ._timegrid import stage_arrays
from .functionals import MONTE_CARLO, OverlapResult, wrap_phase
from .trajectory import Trajectory
from .units import HBAR, PhysicalConfig

BRANCH_SIGN = {"up": 1.0, "down": -1.0}

# dt must resolve the process; coarser sampling is rejected.
MIN_STEPS_PER_PROCESS = 100

DEFAULT_DT_STEPS = 2000       # default dt = t_f / 2000
DEFAULT_REALIZATIONS = 20000
_CHUNK = 512  # fixed chunk size keeps reductions identical for any worker count


@dataclass(frozen=True)
class NoisePath:
    """One sampled realization of the dimensionless force noise xi(t)."""

    dt: float
    values: np.ndarray  # ceil(t_f/dt) samples, i.i.d. N(0, gamma/dt)
    seed: int
    gamma: float


def n_steps(t_f: float, dt: float) -> int:
    return int(math.ceil(t_f / dt - 1e-12))


def sample_noise(gamma: float, dt: float, t_f: float, seed: int) -> NoisePath:
    """Draw a reproducible white-noise path; same seed gives the same path."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt > t_f / MIN_STEPS_PER_PROCESS:
        raise ValueError(
            f"dt={dt} too coarse: need at least {MIN_STEPS_PER_PROCESS} "
            f"steps over t_f={t_f}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    values = rng.normal(0.0, math.sqrt(gamma / dt), n_steps(t_f, dt))
    return NoisePath(dt=dt, values=values, seed=seed, gamma=gamma)


@dataclass(frozen=True)
class GaussianBranchState:
    """Displaced level-n state: centroid, accumulated phase, fixed width.

    phase_action is the full wavefunction phase at the centroid frame:
    classical action / hbar plus the level-n dynamical phase -(n+1/2) omega t.
    The width never changes: linear-in-x perturbations of a harmonic trap
    preserve the Gaussian envelope.
    """

    x_c: float
    p_c: float
    phase_action: float
    width: float
    n: int
    t: float

    def wavefunction(self, x: np.ndarray) -> np.ndarray:
        """Complex wavefunction on a grid (for cross-checks)."""
        from scipy.special import eval_hermite
        a = 1.0 / self.width ** 2
        y = x - self.x_c
        norm = (a / math.pi) ** 0.25 / math.sqrt(2.0 ** self.n * math.factorial(self.n))
        envelope = norm * np.exp(-0.5 * a * y * y) * eval_hermite(self.n, np.sqrt(a) * y)
        return envelope * np.exp(1j * (self.p_c * y / HBAR + self.phase_action))


def _evolve_arrays(cfg, traj, dt, noise_matrix, branch, lam, backend):
    kern = _kernels.get_backend(backend)
    stages = stage_arrays(traj, dt)
    if noise_matrix.shape[1] != len(stages[-1]):
        raise ValueError(
            f"noise has {noise_matrix.shape[1]} steps, layout needs {len(stages[-1])}")
    return kern.evolve_states(BRANCH_SIGN[branch], cfg.m, cfg.omega, cfg.c,
                              cfg.x0, lam, *stages,
                              np.ascontiguousarray(noise_matrix))


def evolve_branch(cfg: PhysicalConfig, traj: Trajectory, path: NoisePath,
                  branch: str, lam: float,
                  backend: str = "auto") -> GaussianBranchState:
    """Exact (to integrator tolerance) final state of one branch."""
    x, p, action = _evolve_arrays(cfg, traj, path.dt, path.values[None, :],
                                  branch, lam, backend)
    phase = action[0] / HBAR - (cfg.n + 0.5) * cfg.omega * traj.t_f
    return GaussianBranchState(x_c=float(x[0]), p_c=float(p[0]),
                               phase_action=float(phase),
                               width=cfg.oscillator_length, n=cfg.n,
                               t=traj.t_f)


def branch_pair_overlap(cfg: PhysicalConfig, up: GaussianBranchState,
                        down: GaussianBranchState) -> tuple[float, float]:
    """(log-modulus, unwrapped phase) of <down|up> for ground-state branches."""
    if up.n != 0 or down.n != 0:
        raise ValueError("closed-form pair overlap implemented for n=0 only")
    dx = up.x_c - down.x_c
    dp = up.p_c - down.p_c
    mw = cfg.m * cfg.omega
    logmod = -mw * dx * dx / (4.0 * HBAR) - dp * dp / (4.0 * mw * HBAR)
    phase = (up.phase_action - down.phase_action
             - (up.p_c + down.p_c) * dx / (2.0 * HBAR))
    return logmod, phase


def _mc_chunk(cfg, traj, dt, lam, sigma, seed, start, count, K, backend):
    """Partial sums over realizations [start, start+count)."""
    xi_up = np.empty((count, K))
    xi_dn = np.empty((count, K))
    for i in range(count):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(start + i,)))
        block = rng.normal(0.0, sigma, size=(2, K))
        xi_up[i] = block[0]
        xi_dn[i] = block[1]

    xu, pu, su = _evolve_arrays(cfg, traj, dt, xi_up, "up", lam, backend)
    xd, pd, sd = _evolve_arrays(cfg, traj, dt, xi_dn, "down", lam, backend)

    dx = xu - xd
    dp = pu - pd
    mw = cfg.m * cfg.omega
    logmod = -mw * dx * dx / (4.0 * HBAR) - dp * dp / (4.0 * mw * HBAR)
    phase = (su - sd) / HBAR - (pu + pd) * dx / (2.0 * HBAR)
    amp = np.exp(logmod)
    re = amp * np.cos(phase)
    im = amp * np.sin(phase)
    sums = np.array([np.sum(re), np.sum(im), np.sum(re * re),
                     np.sum(im * im), np.sum(re * im), np.sum(phase)])
    return sums, re + 1j * im


def mc_overlap(cfg: PhysicalConfig, traj: Trajectory, lam: float, gamma: float,
               dt: float, n_realizations: int = DEFAULT_REALIZATIONS,
               seed: int = 0, workers: int = 1, backend: str = "auto",
               return_samples: bool = False):
    """Monte Carlo estimate of the noise-averaged branch overlap.

    Averages per-realization complex overlaps (independent noise per branch)
    and reports the modulus/phase of the mean with standard errors.  Per-
    realization seeds derive from the realization index, so the reduction is
    bit-identical for any worker count.
    """
    if n_realizations < 100:
        raise ValueError("need at least 100 realizations")
    if cfg.n != 0:
        raise ValueError("Monte Carlo oracle supports the ground state (n=0) only")
    if gamma < 0 or dt <= 0:
        raise ValueError("gamma must be >= 0 and dt positive")
    if dt > traj.t_f / MIN_STEPS_PER_PROCESS:
        raise ValueError(f"dt={dt} too coarse for t_f={traj.t_f}")

    sigma = math.sqrt(gamma / dt)
    K = n_steps(traj.t_f, dt)
    tasks = []
    start = 0
    while start < n_realizations:
        count = min(_CHUNK, n_realizations - start)
        tasks.append((start, count))
        start += count

    def run(task):
        return _mc_chunk(cfg, traj, dt, lam, sigma, seed, task[0], task[1],
                         K, backend)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, tasks))
    else:
        parts = [run(t) for t in tasks]

    # chunk partials combined in index order: order-independent reduction
    totals = np.zeros(6)
    for sums, _ in parts:
        totals += sums
    R = n_realizations
    mean_re, mean_im = totals[0] / R, totals[1] / R
    modulus = math.hypot(mean_re, mean_im)
    ang = math.atan2(mean_im, mean_re)

    var_re = max(0.0, (totals[2] - R * mean_re ** 2) / max(1, R - 1))
    var_im = max(0.0, (totals[3] - R * mean_im ** 2) / max(1, R - 1))
    cov = (totals[4] - R * mean_re * mean_im) / max(1, R - 1)
    cs, sn = math.cos(ang), math.sin(ang)
    var_along = max(0.0, cs * cs * var_re + 2 * cs * sn * cov + sn * sn * var_im)
    var_perp = max(0.0, sn * sn * var_re - 2 * cs * sn * cov + cs * cs * var_im)
    stderr_mod = math.sqrt(var_along / R)
    stderr_phase = math.sqrt(var_perp / R) / modulus if modulus > 0 else math.inf

    mean_phase_raw = totals[5] / R
    wrapped, base_wind = wrap_phase(ang)
    winding = base_wind + round((mean_phase_raw - wrapped) / (2.0 * math.pi))

    result = OverlapResult(modulus=modulus, phase=wrapped, winding=winding,
                           source=MONTE_CARLO, stderr_modulus=stderr_mod,
                           stderr_phase=stderr_phase)
    if return_samples:
        samples = np.concatenate([s for _, s in parts])
        return result, samples
    return result


def pde_crosscheck(cfg: PhysicalConfig, traj: Trajectory,
                   path: NoisePath | None, branch: str, lam: float,
                   substeps: int = 4) -> pde.GridWavefunction:
    """Full split-step evolution of one branch (independent of the fast path)."""
    values = path.values if path is not None else None
    dt = path.dt if path is not None else None
    return pde.split_step_evolve(cfg, traj, branch, lam, noise_values=values,
                                 dt=dt, substeps=substeps)


def crosscheck_fidelity(cfg: PhysicalConfig, traj: Trajectory,
                        path: NoisePath | None, branch: str, lam: float,
                        substeps: int = 4,
                        backend: str = "auto") -> tuple[float, complex]:
    """(|<pde|gaussian>|, full complex overlap) between the two integrators."""
    wf = pde_crosscheck(cfg, traj, path, branch, lam, substeps=substeps)
    if path is None:
        dt = traj.t_f / DEFAULT_DT_STEPS
        path_eff = NoisePath(dt=dt, values=np.zeros(n_steps(traj.t_f, dt)),
                             seed=0, gamma=0.0)
    else:
        path_eff = path
    state = evolve_branch(cfg, traj, path_eff, branch, lam, backend=backend)
    ov = wf.overlap(state.wavefunction(wf.x))
    return abs(ov), ov
