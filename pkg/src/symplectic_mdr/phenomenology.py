"""Float evaluation of ``E^2 = p^2 + m^2 + sigma (ell_star_sq / 3) p^4``.

Natural units with hbar = c = 1.  By default the energy unit is the Planck
energy, so ``ell_star_sq`` is measured in Planck lengths squared.  Times
and distances in observation channels are SI (seconds, metres) after unit
conversion.

The truncated MDR is only trusted for ``ell_star_sq * p**2 <= threshold``
(default 1/10); evaluating outside raises :class:`DomainError`.

Time of flight uses a static distance, ``dt = T (1/v(p_low) - 1/v(p_high))``
with ``T = distance / c``; there is no redshift integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .units import Constants, default_constants, dimension, units_convert

DEFAULT_THRESHOLD = 0.1
SCHEMA_VERSION = 1

# Quoted order of magnitude for the group-velocity shift at 10 TeV.
QUOTED_DV_10TEV = 1e-18


class DomainError(ValueError):
    """Evaluation outside the validity domain of the truncated MDR."""


@dataclass(frozen=True)
class Dispersion:
    m: float = 0.0
    ell_star_sq: float = 0.0
    sigma: int = 1
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        if self.m < 0 or self.ell_star_sq < 0:
            raise ValueError("m and ell_star_sq must be non-negative")
        if self.sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")

    @property
    def p_ceiling(self) -> float:
        """Largest momentum inside the validity domain."""
        if self.ell_star_sq == 0:
            return math.inf
        return math.sqrt(self.threshold / self.ell_star_sq)

    def _args(self):
        return float(self.m), float(self.ell_star_sq), float(self.sigma)


def _as_array(p):
    arr = np.atleast_1d(np.asarray(p, dtype=np.float64))
    return arr, np.ndim(p) == 0


def _check(d: Dispersion, p: np.ndarray):
    if np.any(p < 0):
        raise DomainError("momentum must be non-negative")
    x = d.ell_star_sq * p * p
    if np.any(x > d.threshold * (1 + 1e-12)):
        bad = float(p[np.argmax(x)])
        raise DomainError(f"ell_star_sq * p^2 = {d.ell_star_sq * bad * bad:.3g} exceeds "
                          f"{d.threshold} at p = {bad:.6g}")
    e2 = _kernels.energy_sq(p, *d._args())
    if np.any((e2 < 0) | ((e2 == 0) & (p > 0))):
        turn = math.sqrt(1.5 / d.ell_star_sq) if d.ell_star_sq else math.inf
        raise DomainError(f"non-positive E^2; the sigma = -1 branch turns over at p = {turn:.6g}")
    return e2


def _out(a, scalar):
    return float(a[0]) if scalar else a


def energy(d: Dispersion, p):
    arr, scalar = _as_array(p)
    return _out(np.sqrt(_check(d, arr)), scalar)


def group_velocity(d: Dispersion, p):
    """``dE/dp = (p + 2 sigma ell_star_sq p^3 / 3) / E`` in units of c."""
    arr, scalar = _as_array(p)
    _check(d, arr)
    return _out(_kernels.group_velocity(arr, *d._args()), scalar)


def inverse_velocity_excess(d: Dispersion, p):
    """``1/v - 1`` evaluated without cancellation."""
    arr, scalar = _as_array(p)
    _check(d, arr)
    return _out(_kernels.inverse_velocity_excess(arr, *d._args()), scalar)


def velocity_shift(d: Dispersion, p):
    """``v - 1``, stable for massless particles."""
    arr, scalar = _as_array(p)
    _check(d, arr)
    return _out(_kernels.velocity_excess(arr, *d._args()), scalar)


def momentum(d: Dispersion, e: float) -> float:
    """Invert :func:`energy` by bracketed root finding."""
    e = float(e)
    if e < d.m:
        raise DomainError(f"energy {e} below the rest mass {d.m}")
    if e == d.m:
        return 0.0
    hi = min(d.p_ceiling, 2.0 * e) if d.sigma < 0 else min(d.p_ceiling, e)
    if not math.isfinite(hi):
        hi = e
    if energy(d, hi) < e:
        raise DomainError(f"energy {e} is not attained inside the validity domain "
                          f"(maximum {energy(d, hi):.6g} at p = {hi:.6g})")
    e2 = e * e

    def f(p):
        return float(_kernels.energy_sq(np.array([p]), *d._args())[0]) - e2

    return brentq(f, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


# ---------------------------------------------------------------------------
# observation channels


@dataclass(frozen=True)
class ObservationChannel:
    """Channel in working units: metres, natural energy units, seconds."""

    distance: float
    e_high: float
    e_low: float
    delta_t_bound: float
    name: str = "channel"
    redshift: float | None = None

    def __post_init__(self):
        if not self.distance > 0:
            raise ValueError("distance must be positive")
        if not (self.e_high > self.e_low >= 0):
            raise ValueError("need e_high > e_low >= 0")
        if not self.delta_t_bound > 0:
            raise ValueError("delta_t_bound must be positive")

    def travel_time(self, constants: Constants | None = None) -> float:
        k = constants or default_constants()
        return self.distance / float(k.c)

    @classmethod
    def from_json(cls, obj, energy_unit: str = "E_P", constants: Constants | None = None):
        def q(key, dim, target):
            item = obj[key]
            unit = item["unit"]
            if dimension(unit) != dim:
                raise ValueError(f"{key}: unit {unit!r} is not a {dim} unit")
            return float(units_convert(float(item["value"]), unit, target, constants))

        return cls(
            distance=q("distance", "length", "m"),
            e_high=q("e_high", "energy", energy_unit),
            e_low=q("e_low", "energy", energy_unit),
            delta_t_bound=q("delta_t_bound", "time", "s"),
            name=obj.get("name", "channel"),
            redshift=obj.get("redshift"),
        )


def time_of_flight_delay(d: Dispersion, ch: ObservationChannel, constants: Constants | None = None) -> float:
    """Arrival-time difference ``T (1/v(p_low) - 1/v(p_high))`` in seconds."""
    p_hi = momentum(d, ch.e_high)
    p_lo = momentum(d, ch.e_low) if ch.e_low > d.m else 0.0
    ex = inverse_velocity_excess(d, np.array([p_lo, p_hi]))
    if not np.all(np.isfinite(ex)):
        raise DomainError("low-energy particle at rest: delay is unbounded")
    return ch.travel_time(constants) * float(ex[0] - ex[1])


@dataclass
class BoundResult:
    channel: str
    sigma: int
    ell_star_sq_bound: float
    ell_star_sq_bound_in_planck_units: float
    unconstrained: bool = False
    iterations: int = 0

    def to_json(self) -> dict:
        return {
            "channel": self.channel,
            "sigma": self.sigma,
            "ell_star_sq_bound": self.ell_star_sq_bound,
            "ell_star_sq_bound_in_planck_units": self.ell_star_sq_bound_in_planck_units,
            "unconstrained": self.unconstrained,
        }


def planck_factor(energy_unit: str = "E_P", constants: Constants | None = None) -> float:
    """Multiply an ``ell_star_sq`` in ``energy_unit**-2`` by this to get units of ``l_P**2``."""
    return float(units_convert(1, "E_P", energy_unit, constants)) ** 2


def invert_bound(ch: ObservationChannel, sigma: int, m: float = 0.0, *, threshold: float = DEFAULT_THRESHOLD,
                 rtol: float = 1e-14, energy_unit: str = "E_P", constants: Constants | None = None) -> BoundResult:
    """Largest ``ell_star_sq`` with ``|dt| <= delta_t_bound``, by monotone bisection."""
    ceiling = threshold / (ch.e_high * ch.e_high)
    # p <= E for sigma = +1, so this ceiling keeps the search in the domain;
    # for sigma = -1 p slightly exceeds E and the ceiling is shaved.
    if sigma < 0:
        ceiling *= 1 - threshold / 2

    def delay(l2):
        return abs(time_of_flight_delay(Dispersion(m, l2, sigma, threshold), ch, constants))

    to_planck = planck_factor(energy_unit, constants)
    if delay(ceiling) <= ch.delta_t_bound:
        return BoundResult(ch.name, sigma, ceiling, ceiling * to_planck, unconstrained=True)
    lo, hi = 0.0, ceiling
    f_lo = delay(lo)
    it = 0
    while hi - lo > rtol * hi and it < 2000:
        it += 1
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = delay(mid)
        if f_mid < f_lo:
            raise DomainError(f"delay not monotone in ell_star_sq near {mid:.6g}")
        if f_mid <= ch.delta_t_bound:
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    bound = 0.5 * (lo + hi)
    return BoundResult(ch.name, sigma, bound, bound * to_planck, iterations=it)


def dispersion_table(d: Dispersion, p_values, travel_time: float = 1.0) -> list[dict]:
    """Rows ``p, E, v, dt`` where ``dt = travel_time * (1 - 1/v)`` is the lead over a speed-1 signal."""
    p = np.asarray(p_values, dtype=np.float64)
    e = energy(d, p)
    v = group_velocity(d, p)
    ex = inverse_velocity_excess(d, p)
    return [{"p": float(a), "E": float(b), "v": float(c), "dt": float(-travel_time * x)}
            for a, b, c, x in zip(p, e, v, ex)]


def benchmark_shift(energy_value: float = 10.0, unit: str = "TeV", ell_star_sq: float = 1.0,
                    constants: Constants | None = None) -> dict:
    """Group-velocity shift of a massless particle at the given energy for ``ell_star_sq`` in l_P^2.

    Reported next to the quoted ~1e-18 figure, which the quartic MDR does
    not reproduce.
    """
    e = float(units_convert(float(energy_value), unit, "E_P", constants))
    d = Dispersion(0.0, ell_star_sq, +1)
    p = momentum(d, e)
    dv = velocity_shift(d, p)
    return {
        "energy": energy_value, "unit": unit, "E_over_E_P": e,
        "computed_dv": dv, "quoted_dv_order": QUOTED_DV_10TEV,
        "discrepancy": not (0.1 < dv / QUOTED_DV_10TEV < 10),
    }
