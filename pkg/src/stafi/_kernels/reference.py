"""Pure-NumPy branch-evolution kernel (fallback for the compiled extension).

Vectorizes the fixed-step RK4 integration of the branch centroid equations
over realizations.  The compiled Cython kernel in _evolve.pyx implements the
identical arithmetic; keep the two in lockstep.
"""

import numpy as np

COMPILED = False


def evolve_states(sign, m, omega, c, x0, lam,
                  alpha0, alpham, alpha1, acc0, accm, acc1,
                  hsteps, noise):
    """Integrate (x, p, action) for one branch over all noise realizations.

    Parameters
    ----------
    sign : +1 (spin up) or -1 (spin down) branch sign.
    alpha0, alpham, alpha1 : (K,) trajectory at step start / midpoint / end.
    acc0, accm, acc1 : (K,) trajectory acceleration at the same stage times.
    hsteps : (K,) step sizes (uniform except possibly the last).
    noise : (R, K) dimensionless noise samples, constant within each step.

    Returns
    -------
    x, p, action : (R,) final centroid position, momentum and classical action.
    """
    R, K = noise.shape
    s = float(sign)
    mw2 = m * omega * omega
    x = np.zeros(R)
    p = np.zeros(R)
    act = np.zeros(R)

    for k in range(K):
        h = hsteps[k]
        a0 = alpha0[k]; am = alpham[k]; a1 = alpha1[k]
        g0 = acc0[k]; gm = accm[k]; g1 = acc1[k]
        q = 1.0 + lam * noise[:, k]

        f0 = s * m * g0 * q
        fm = s * m * gm * q
        f1 = s * m * g1 * q

        d0 = x - s * a0
        k1x = p / m
        k1p = -mw2 * d0 + c + f0
        k1s = p * p / (2.0 * m) - 0.5 * mw2 * d0 * d0 + c * x + (x - x0) * f0

        x2 = x + 0.5 * h * k1x
        p2 = p + 0.5 * h * k1p
        d2 = x2 - s * am
        k2x = p2 / m
        k2p = -mw2 * d2 + c + fm
        k2s = p2 * p2 / (2.0 * m) - 0.5 * mw2 * d2 * d2 + c * x2 + (x2 - x0) * fm

        x3 = x + 0.5 * h * k2x
        p3 = p + 0.5 * h * k2p
        d3 = x3 - s * am
        k3x = p3 / m
        k3p = -mw2 * d3 + c + fm
        k3s = p3 * p3 / (2.0 * m) - 0.5 * mw2 * d3 * d3 + c * x3 + (x3 - x0) * fm

        x4 = x + h * k3x
        p4 = p + h * k3p
        d4 = x4 - s * a1
        k4x = p4 / m
        k4p = -mw2 * d4 + c + f1
        k4s = p4 * p4 / (2.0 * m) - 0.5 * mw2 * d4 * d4 + c * x4 + (x4 - x0) * f1

        w = h / 6.0
        x += w * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        p += w * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        act += w * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)

    return x, p, act
