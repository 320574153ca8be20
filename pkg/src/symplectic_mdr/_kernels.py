"""Elementwise float kernels for the quartic MDR.

Each kernel has a numba-compiled loop and a pure-numpy twin with identical
arithmetic.  Set ``SYMPLECTIC_MDR_DISABLE_NUMBA=1`` (or run without numba
installed) to use the numpy path.

All kernels take ``(p, m, l2, sigma)`` with ``p`` a 1-D float64 array,
``m`` the mass, ``l2`` the geometric scale ``ell_star_sq`` and ``sigma`` the
orientation sign, everything in natural units.
"""

import math
import os

import numpy as np

_DISABLE = os.environ.get("SYMPLECTIC_MDR_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLE:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# numpy path


def energy_sq_np(p, m, l2, sigma):
    return p * p + m * m + sigma * l2 * p**4 / 3.0


def group_velocity_np(p, m, l2, sigma):
    e = np.sqrt(energy_sq_np(p, m, l2, sigma))
    num = p + 2.0 * sigma * l2 * p**3 / 3.0
    with np.errstate(invalid="ignore", divide="ignore"):
        v = num / e
    # massless limit at p = 0
    return np.where((p == 0.0) & (m == 0.0), 1.0, v)


def inverse_velocity_excess_np(p, m, l2, sigma):
    """``1/v - 1`` without cancellation for ``l2 p^2 << 1``."""
    e = np.sqrt(energy_sq_np(p, m, l2, sigma))
    with np.errstate(invalid="ignore", divide="ignore"):
        e_minus_p = (m * m + sigma * l2 * p**4 / 3.0) / (e + p)
        num = e_minus_p - 2.0 * sigma * l2 * p**3 / 3.0
        den = p * (1.0 + 2.0 * sigma * l2 * p * p / 3.0)
        out = num / den
    out = np.where(p == 0.0, np.where(m == 0.0, 0.0, np.inf), out)
    return out


def velocity_excess_np(p, m, l2, sigma):
    """``v - 1`` without cancellation for massless particles and ``l2 p^2 << 1``."""
    x = l2 * p * p
    root = np.sqrt(1.0 + sigma * x / 3.0)
    massless = (2.0 * sigma * x / 3.0 - (sigma * x / 3.0) / (root + 1.0)) / root
    if m == 0.0:
        return np.where(p == 0.0, 0.0, massless)
    return group_velocity_np(p, m, l2, sigma) - 1.0


# ---------------------------------------------------------------------------
# numba path

if HAVE_NUMBA:

    @njit(cache=False)
    def energy_sq_nb(p, m, l2, sigma):
        out = np.empty_like(p)
        for i in range(p.shape[0]):
            q = p[i]
            out[i] = q * q + m * m + sigma * l2 * q**4 / 3.0
        return out

    @njit(cache=False)
    def group_velocity_nb(p, m, l2, sigma):
        out = np.empty_like(p)
        for i in range(p.shape[0]):
            q = p[i]
            if q == 0.0 and m == 0.0:
                out[i] = 1.0
                continue
            e = math.sqrt(q * q + m * m + sigma * l2 * q**4 / 3.0)
            out[i] = (q + 2.0 * sigma * l2 * q**3 / 3.0) / e
        return out

    @njit(cache=False)
    def inverse_velocity_excess_nb(p, m, l2, sigma):
        out = np.empty_like(p)
        for i in range(p.shape[0]):
            q = p[i]
            if q == 0.0:
                out[i] = 0.0 if m == 0.0 else np.inf
                continue
            e = math.sqrt(q * q + m * m + sigma * l2 * q**4 / 3.0)
            e_minus_p = (m * m + sigma * l2 * q**4 / 3.0) / (e + q)
            num = e_minus_p - 2.0 * sigma * l2 * q**3 / 3.0
            out[i] = num / (q * (1.0 + 2.0 * sigma * l2 * q * q / 3.0))
        return out

    @njit(cache=False)
    def velocity_excess_nb(p, m, l2, sigma):
        out = np.empty_like(p)
        for i in range(p.shape[0]):
            q = p[i]
            if m == 0.0:
                if q == 0.0:
                    out[i] = 0.0
                    continue
                x = l2 * q * q
                root = math.sqrt(1.0 + sigma * x / 3.0)
                out[i] = (2.0 * sigma * x / 3.0 - (sigma * x / 3.0) / (root + 1.0)) / root
            else:
                e = math.sqrt(q * q + m * m + sigma * l2 * q**4 / 3.0)
                out[i] = (q + 2.0 * sigma * l2 * q**3 / 3.0) / e - 1.0
        return out

    energy_sq = energy_sq_nb
    group_velocity = group_velocity_nb
    inverse_velocity_excess = inverse_velocity_excess_nb
    velocity_excess = velocity_excess_nb
    BACKEND = "numba"
else:
    energy_sq = energy_sq_np
    group_velocity = group_velocity_np
    inverse_velocity_excess = inverse_velocity_excess_np
    velocity_excess = velocity_excess_np
    BACKEND = "numpy"
