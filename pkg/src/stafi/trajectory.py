"""Trap trajectories alpha(t) with analytic derivatives.

Both polynomial families vanish together with their velocity at t=0 and t=t_f
and reach maximum displacement M at t_f/2.  The sixth-order family also has
vanishing acceleration at the boundaries, so its compensating force switches
on and off smoothly; the fourth-order family deliberately does not.

Derivatives up to 4th order are analytic (no finite differencing): the noise
functional depends on alpha''^2 and the variational machinery needs 4th
derivatives, so differencing noise would contaminate every downstream number.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.interpolate import make_interp_spline

MAX_DERIVATIVE_ORDER = 4

# Coefficients of the two families in the scaled variable u = t/t_f.
_SIXTH_COEFFS = np.array([0.0, 0.0, 0.0, 64.0, -192.0, 192.0, -64.0])
_FOURTH_COEFFS = np.array([0.0, 0.0, 16.0, -32.0, 16.0])


class TrajectoryDomainError(ValueError):
    """Evaluation outside [0, t_f] or with an unsupported derivative order."""


class Trajectory:
    """Base class: a twice-plus differentiable path alpha(t) on [0, t_f]."""

    kind: str = "base"

    def __init__(self, t_f: float):
        if not t_f > 0:
            raise ValueError(f"t_f must be positive, got {t_f}")
        self.t_f = float(t_f)

    def _check_domain(self, t, order: int):
        if not (0 <= order <= MAX_DERIVATIVE_ORDER) or int(order) != order:
            raise TrajectoryDomainError(
                f"derivative order must be an integer in 0..{MAX_DERIVATIVE_ORDER}, got {order}")
        t = np.asarray(t, dtype=float)
        slack = 1e-12 * self.t_f
        if np.any(t < -slack) or np.any(t > self.t_f + slack):
            raise TrajectoryDomainError(
                f"t outside [0, {self.t_f}] (clamping is not performed)")
        return np.clip(t, 0.0, self.t_f)

    def eval(self, t, order: int = 0):
        raise NotImplementedError

    def __call__(self, t, order: int = 0):
        return self.eval(t, order)


class _PolynomialTrajectory(Trajectory):
    """Polynomial in u = t/t_f; chain rule supplies the t_f^-order factors."""

    def __init__(self, M: float, t_f: float, u_coeffs: np.ndarray):
        super().__init__(t_f)
        self.M = float(M)
        self._coeffs = [M * u_coeffs]
        for _ in range(MAX_DERIVATIVE_ORDER):
            self._coeffs.append(npoly.polyder(self._coeffs[-1]))

    def eval(self, t, order: int = 0):
        t = self._check_domain(t, order)
        u = t / self.t_f
        return npoly.polyval(u, self._coeffs[order]) / self.t_f ** order


class SixthOrderTrajectory(_PolynomialTrajectory):
    """alpha(t) = M (64u^3 - 192u^4 + 192u^5 - 64u^6), u = t/t_f."""

    kind = "sixth"

    def __init__(self, M: float, t_f: float):
        super().__init__(M, t_f, _SIXTH_COEFFS)


class FourthOrderTrajectory(_PolynomialTrajectory):
    """alpha(t) = M (16u^4 - 32u^3 + 16u^2); alpha'' does not vanish at t=0, t_f."""

    kind = "fourth"

    def __init__(self, M: float, t_f: float):
        super().__init__(M, t_f, _FOURTH_COEFFS)


class GridTrajectory(Trajectory):
    """Quintic-spline interpolant of sampled alpha values (optimizer output).

    Degree-5 B-splines are C^4, so the second derivative entering the noise
    functional is continuous and orders 3-4 remain defined everywhere the
    grid supports them.
    """

    kind = "grid"

    def __init__(self, times: np.ndarray, values: np.ndarray):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be matching 1-d arrays")
        if times.size < 8:
            raise ValueError("need at least 8 samples for a quintic interpolant")
        if times[0] != 0.0:
            raise ValueError("time grid must start at 0")
        if np.any(np.diff(times) <= 0):
            raise ValueError("time grid must be strictly increasing")
        super().__init__(times[-1])
        self.M = None
        self._spline = make_interp_spline(times, values, k=5)

    def eval(self, t, order: int = 0):
        t = self._check_domain(t, order)
        return self._spline(t, nu=order)


def make_sixth_order(M: float, t_f: float) -> SixthOrderTrajectory:
    """Paper's default STA family: smooth compensating force, alpha(t_f/2) = M."""
    return SixthOrderTrajectory(M, t_f)


def make_fourth_order(M: float, t_f: float) -> FourthOrderTrajectory:
    """Comparison family whose acceleration jumps at the boundaries."""
    return FourthOrderTrajectory(M, t_f)


def make_family(family: str, M: float, t_f: float) -> Trajectory:
    if family == "sixth":
        return make_sixth_order(M, t_f)
    if family == "fourth":
        return make_fourth_order(M, t_f)
    raise ValueError(f"unknown trajectory family {family!r} (expected 'sixth' or 'fourth')")


def compensating_force(traj: Trajectory, m: float, t):
    """Inverse-engineered homogeneous force f(t) = m*alpha''(t)."""
    return m * traj.eval(t, order=2)
