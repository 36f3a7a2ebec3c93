"""Split-step Fourier propagation of one branch wavefunction.

Independent cross-check of the Gaussian (centroid + action) fast path: the
full time-dependent Schroedinger equation is integrated spectrally on a
position grid, with the same piecewise-constant noise the fast path sees.
Slow but assumption-free; not used in acceptance sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_hermite

from . import _kernels
from ._timegrid import stage_arrays, step_layout
from .trajectory import Trajectory
from .units import HBAR, PhysicalConfig

_BRANCH_SIGN = {"up": 1.0, "down": -1.0}

# Probability allowed in the outer 10% of the grid before declaring escape.
ESCAPE_THRESHOLD = 1e-8
MAX_GRID_POINTS = 1 << 20


class GridEscapeError(RuntimeError):
    """Wavefunction reached the grid edge; enlarge the grid."""


@dataclass
class GridWavefunction:
    """Position-grid wavefunction with its equally spaced grid."""

    x: np.ndarray
    psi: np.ndarray

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.dx)

    def overlap(self, other: np.ndarray) -> complex:
        """<self|other> on the shared grid."""
        return complex(np.sum(np.conj(self.psi) * other) * self.dx)


def hermite_level(cfg: PhysicalConfig, x: np.ndarray, center: float = 0.0,
                  n: int | None = None) -> np.ndarray:
    """Normalized level-n harmonic oscillator eigenfunction on a grid."""
    if n is None:
        n = cfg.n
    a = cfg.m * cfg.omega / HBAR
    y = x - center
    norm = (a / math.pi) ** 0.25 / math.sqrt(2.0 ** n * math.factorial(n))
    return norm * np.exp(-0.5 * a * y * y) * eval_hermite(n, np.sqrt(a) * y)


def _centroid_bounds(cfg, sign, lam, stages, noise):
    """Min/max centroid position and max |momentum| along one realization.

    Scalar mirror of the RK4 kernel, tracking extrema at step boundaries
    (intra-step excursions are negligible at the resolutions the noise guard
    enforces).
    """
    alpha0, alpham, alpha1, acc0, accm, acc1, h = stages
    m, w2 = cfg.m, cfg.m * cfg.omega ** 2
    c, x0, s = cfg.c, cfg.x0, sign
    x = p = 0.0
    xmin = xmax = 0.0
    pmax = 0.0

    def accel(xv, a, g, q):
        return -w2 * (xv - s * a) + c + s * m * g * q

    for k in range(len(h)):
        q = 1.0 + lam * noise[k]
        hk = h[k]
        k1x = p / m
        k1p = accel(x, alpha0[k], acc0[k], q)
        x2 = x + 0.5 * hk * k1x; p2 = p + 0.5 * hk * k1p
        k2x = p2 / m
        k2p = accel(x2, alpham[k], accm[k], q)
        x3 = x + 0.5 * hk * k2x; p3 = p + 0.5 * hk * k2p
        k3x = p3 / m
        k3p = accel(x3, alpham[k], accm[k], q)
        x4 = x + hk * k3x; p4 = p + hk * k3p
        k4x = p4 / m
        k4p = accel(x4, alpha1[k], acc1[k], q)
        x += hk / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        p += hk / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
        xmin = min(xmin, x); xmax = max(xmax, x); pmax = max(pmax, abs(p))
    return xmin, xmax, pmax


def build_grid(cfg: PhysicalConfig, xmin: float, xmax: float, pmax: float,
               pad_lengths: float = 8.0) -> np.ndarray:
    """Position grid spanning the excursion plus pad_lengths oscillator lengths."""
    ell = cfg.oscillator_length
    lo = xmin - pad_lengths * ell
    hi = xmax + pad_lengths * ell
    # resolve the largest momentum plus the wavepacket's own momentum tail
    k_need = 1.25 * pmax / HBAR + 10.0 / ell
    dx = math.pi / k_need
    n = 1 << max(8, math.ceil(math.log2((hi - lo) / dx)))
    if n > MAX_GRID_POINTS:
        raise GridEscapeError(f"grid would need {n} points; reduce the excursion")
    return lo + np.arange(n) * ((hi - lo) / n)


def split_step_evolve(cfg: PhysicalConfig, traj: Trajectory, branch: str,
                      lam: float = 0.0, noise_values: np.ndarray | None = None,
                      dt: float | None = None, substeps: int = 4,
                      grid: np.ndarray | None = None) -> GridWavefunction:
    """Evolve the level-n branch state to t_f with Strang splitting.

    noise_values are the per-step xi samples (one per noise step of length
    dt); None means noiseless.  The spectral step is dt/substeps.
    """
    sign = _BRANCH_SIGN[branch]
    if dt is None:
        dt = traj.t_f / 2000.0
    t0, h = step_layout(traj.t_f, dt)
    if noise_values is None:
        noise_values = np.zeros(len(h))
    if len(noise_values) != len(h):
        raise ValueError(f"noise has {len(noise_values)} samples, need {len(h)}")

    if grid is None:
        stages = stage_arrays(traj, dt)
        xmin, xmax, pmax = _centroid_bounds(cfg, sign, lam, stages, noise_values)
        sigma_p = math.sqrt(cfg.m * cfg.omega * HBAR)
        grid = build_grid(cfg, xmin, xmax, pmax + 4.0 * sigma_p)
    x = grid
    n_pts = len(x)
    dx = x[1] - x[0]
    psi = hermite_level(cfg, x).astype(complex)

    k = 2.0 * math.pi * np.fft.fftfreq(n_pts, d=dx)
    m, w2 = cfg.m, cfg.m * cfg.omega ** 2

    def potential(t, q):
        a = traj.eval(t, 0)
        g = traj.eval(t, 2)
        return (0.5 * w2 * (x - sign * a) ** 2 - cfg.c * x
                - sign * (x - cfg.x0) * m * g * q)

    edge = max(1, n_pts // 20)  # outer 10% of the grid, both sides together
    for step in range(len(h)):
        hs = h[step] / substeps
        kin = np.exp(-0.5j * HBAR * k * k * hs / m)
        q = 1.0 + lam * noise_values[step]
        for j in range(substeps):
            t_mid = t0[step] + (j + 0.5) * hs
            half_kick = np.exp(-0.5j * potential(t_mid, q) * hs / HBAR)
            psi = half_kick * np.fft.ifft(kin * np.fft.fft(half_kick * psi))
        if step % 200 == 0 or step == len(h) - 1:
            p_edge = (np.sum(np.abs(psi[:edge]) ** 2)
                      + np.sum(np.abs(psi[-edge:]) ** 2)) * dx
            if p_edge > ESCAPE_THRESHOLD:
                raise GridEscapeError(
                    f"probability {p_edge:.2e} in outer 10% of grid at step "
                    f"{step}; enlarge the grid")

    return GridWavefunction(x=x, psi=psi)
