"""Scalar functionals of a trajectory: sensitivity, noise functional, overlap.

Quadrature strategy: Gauss-Legendre with 24 nodes for the polynomial
trajectory families (exact for integrand degree <= 47, far above the degree-20
integrand alpha^2*alpha''^2 of the sixth-order family), adaptive Gauss-Kronrod
(scipy.integrate.quad) for grid interpolants with absolute tolerance
1e-12 * scale.

The visibility loss is the second-order noise average of the branch overlap.
With white noise E[xi(t)xi(s)] = gamma*delta(t-s) and the half-delta
convention for the equal-time kernel (the value an exact average over
realizations of the stochastic dynamics produces), the deficit is

    D = (lambda^2 gamma m^2 / hbar^2)
        * Int [alpha^2 + (2n+1) hbar/(2 m omega) + x0^2] alpha''^2 dt.

Each of the three bracket terms is returned separately so sweeps can report
which one dominates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .trajectory import GridTrajectory, Trajectory
from .units import HBAR, PhysicalConfig

GAUSS_NODES = 24

PERTURBATIVE = "perturbative"
MONTE_CARLO = "monte_carlo"


@lru_cache(maxsize=8)
def _gauss_rule(n: int):
    return np.polynomial.legendre.leggauss(n)


def integrate_trajectory(func: Callable[[np.ndarray], np.ndarray],
                         traj: Trajectory) -> float:
    """Integrate func(t) over [0, t_f] with the trajectory-appropriate rule."""
    if isinstance(traj, GridTrajectory):
        x, w = _gauss_rule(64)
        half = 0.5 * traj.t_f
        scale = max(1.0, abs(float(np.sum(w * func(half * (x + 1.0))) * half)))
        val, _ = quad(func, 0.0, traj.t_f, epsabs=1e-12 * scale,
                      epsrel=1e-12, limit=200)
        return val
    x, w = _gauss_rule(GAUSS_NODES)
    half = 0.5 * traj.t_f
    t = half * (x + 1.0)
    return float(np.sum(w * func(t)) * half)


def sensitivity(traj: Trajectory) -> tuple[float, float]:
    """Return (S_star, S): the bare integral of alpha and the phase slope 2*S_star/hbar."""
    s_star = integrate_trajectory(lambda t: traj.eval(t, 0), traj)
    return s_star, 2.0 * s_star / HBAR


def noise_functional_W(traj: Trajectory) -> float:
    """W = Int alpha^2 alpha''^2 dt, the trajectory part of the visibility loss."""
    return integrate_trajectory(
        lambda t: traj.eval(t, 0) ** 2 * traj.eval(t, 2) ** 2, traj)


def acceleration_moment(traj: Trajectory) -> float:
    """Int alpha''^2 dt, multiplying the zero-point and x0 loss terms."""
    return integrate_trajectory(lambda t: traj.eval(t, 2) ** 2, traj)


def prefactor(traj_or_family, M: float | None = None,
              t_f: float | None = None) -> float:
    """Dimensionless W * t_f^7 / S_star^4; independent of M and t_f by scaling."""
    if isinstance(traj_or_family, Trajectory):
        traj = traj_or_family
    else:
        from .trajectory import make_family
        if M is None or t_f is None:
            raise ValueError("family prefactor needs M and t_f")
        traj = make_family(traj_or_family, M, t_f)
    s_star, _ = sensitivity(traj)
    w = noise_functional_W(traj)
    return w * traj.t_f ** 7 / s_star ** 4


# Second-order truncation of the overlap modulus is meaningless past ~0.5.
PERTURBATIVE_LIMIT = 0.5


@dataclass(frozen=True)
class VisibilityLoss:
    """Decomposition of the second-order modulus deficit D."""

    total: float
    alpha_term: float       # from alpha^2(t) * alpha''^2(t)
    zero_point_term: float  # from (2n+1) hbar/(2 m omega) * alpha''^2(t)
    x0_term: float          # from x0^2 * alpha''^2(t)
    regime_violated: bool   # total > 0.5: second-order truncation unreliable


def visibility_loss(traj: Trajectory, cfg: PhysicalConfig) -> VisibilityLoss:
    """Perturbative visibility loss D and its three named contributions."""
    pref = cfg.lambda_sq_gamma * cfg.m ** 2 / HBAR ** 2
    accel2 = acceleration_moment(traj)
    alpha_term = pref * noise_functional_W(traj)
    zero_point = pref * (2 * cfg.n + 1) * HBAR / (2.0 * cfg.m * cfg.omega) * accel2
    x0_term = pref * cfg.x0 ** 2 * accel2
    total = alpha_term + zero_point + x0_term
    return VisibilityLoss(total, alpha_term, zero_point, x0_term,
                          regime_violated=total > PERTURBATIVE_LIMIT)


def wrap_phase(phi: float) -> tuple[float, int]:
    """Split a phase into its principal value in (-pi, pi] and a winding count."""
    winding = round(phi / (2.0 * math.pi))
    wrapped = phi - 2.0 * math.pi * winding
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
        winding -= 1
    return wrapped, winding


@dataclass(frozen=True)
class OverlapResult:
    """Branch overlap as (modulus, phase), with provenance.

    phase is the principal value in (-pi, pi]; winding restores the full
    accumulated phase as phase + 2*pi*winding.  Standard errors are present
    only for Monte Carlo results.
    """

    modulus: float
    phase: float
    winding: int
    source: str
    stderr_modulus: float | None = None
    stderr_phase: float | None = None
    regime_violated: bool = False

    @property
    def total_phase(self) -> float:
        return self.phase + 2.0 * math.pi * self.winding


def perturbative_overlap(traj: Trajectory, cfg: PhysicalConfig) -> OverlapResult:
    """Second-order prediction: modulus 1 - D, phase (2c/hbar) Int alpha dt."""
    loss = visibility_loss(traj, cfg)
    s_star, _ = sensitivity(traj)
    phase_total = 2.0 * cfg.c * s_star / HBAR
    wrapped, winding = wrap_phase(phase_total)
    modulus = min(1.0, max(0.0, 1.0 - loss.total))
    return OverlapResult(modulus, wrapped, winding, PERTURBATIVE,
                         regime_violated=loss.regime_violated)


def populations(overlap: OverlapResult) -> tuple[float, float]:
    """Interference populations (P_up, P_down) after the closing pi/2 pulse."""
    p_up = 0.5 + 0.5 * overlap.modulus * math.cos(overlap.total_phase)
    return p_up, 1.0 - p_up


def fringe_peak_positions(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Locations of local maxima of y(x), refined by parabolic interpolation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    i = np.arange(1, len(y) - 1)
    mask = (y[i] >= y[i - 1]) & (y[i] > y[i + 1])
    peaks = []
    for j in i[mask]:
        denom = y[j - 1] - 2.0 * y[j] + y[j + 1]
        off = 0.0 if denom == 0 else 0.5 * (y[j - 1] - y[j + 1]) / denom
        peaks.append(x[j] + off * (x[j + 1] - x[j]))
    return np.array(peaks)


def fringe_period(x: np.ndarray, y: np.ndarray) -> float:
    """Mean spacing of adjacent fringe maxima."""
    peaks = fringe_peak_positions(x, y)
    if len(peaks) < 2:
        raise ValueError("need at least two maxima to measure a period")
    return float(np.mean(np.diff(peaks)))
