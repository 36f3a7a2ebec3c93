"""Shared step layout for the noise-driven integrators.

The noise is piecewise constant on steps of length dt; RK4 and the split-step
integrator both need the trajectory and its acceleration at the start,
midpoint and end of every step.  The final step is shortened to land exactly
on t_f when t_f is not a multiple of dt.
"""

from __future__ import annotations

import numpy as np

from .trajectory import Trajectory


def step_layout(t_f: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Return (t_start, h) arrays for ceil(t_f/dt) steps covering [0, t_f]."""
    n_steps = int(np.ceil(t_f / dt - 1e-12))
    t_start = np.arange(n_steps) * dt
    h = np.full(n_steps, dt)
    h[-1] = t_f - t_start[-1]
    return t_start, h


def stage_arrays(traj: Trajectory, dt: float):
    """Trajectory data at RK4 stage times.

    Returns (alpha0, alpham, alpha1, acc0, accm, acc1, hsteps), each (K,).
    """
    t0, h = step_layout(traj.t_f, dt)
    tm = t0 + 0.5 * h
    t1 = t0 + h
    return (traj.eval(t0, 0), traj.eval(tm, 0), traj.eval(t1, 0),
            traj.eval(t0, 2), traj.eval(tm, 2), traj.eval(t1, 2), h)
