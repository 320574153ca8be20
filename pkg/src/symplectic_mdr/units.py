"""Unit registry for the phenomenology boundary.

Factors are exact rationals built from the constants file, so conversions
of exact inputs stay exact.  Length and time interconvert through ``c``
(light-travel time).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path


class UnitError(KeyError):
    pass


@dataclass(frozen=True)
class Constants:
    c: Fraction
    planck_energy_GeV: Fraction
    planck_length_m: Fraction
    planck_time_s: Fraction
    parsec_m: Fraction

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Constants":
        if path is None:
            text = resources.files("symplectic_mdr").joinpath("data/constants.json").read_text()
        else:
            text = Path(path).read_text()
        raw = json.loads(text)
        return cls(
            c=Fraction(raw["speed_of_light_m_per_s"]),
            planck_energy_GeV=Fraction(raw["planck_energy_GeV"]),
            planck_length_m=Fraction(raw["planck_length_m"]),
            planck_time_s=Fraction(raw["planck_time_s"]),
            parsec_m=Fraction(raw["parsec_m"]),
        )


@lru_cache(maxsize=None)
def default_constants() -> Constants:
    return Constants.load()


def _table(k: Constants) -> dict:
    # unit -> (dimension, factor to the base unit of that dimension)
    return {
        "eV": ("energy", Fraction(1, 10**9)),
        "keV": ("energy", Fraction(1, 10**6)),
        "MeV": ("energy", Fraction(1, 10**3)),
        "GeV": ("energy", Fraction(1)),
        "TeV": ("energy", Fraction(10**3)),
        "PeV": ("energy", Fraction(10**6)),
        "E_P": ("energy", k.planck_energy_GeV),
        "m": ("length", Fraction(1)),
        "km": ("length", Fraction(1000)),
        "pc": ("length", k.parsec_m),
        "kpc": ("length", k.parsec_m * 10**3),
        "Mpc": ("length", k.parsec_m * 10**6),
        "Gpc": ("length", k.parsec_m * 10**9),
        "l_P": ("length", k.planck_length_m),
        "s": ("time", Fraction(1)),
        "t_P": ("time", k.planck_time_s),
    }


UNITS = tuple(_table(Constants(*(Fraction(1),) * 5)))


def conversion_factor(from_unit: str, to_unit: str, constants: Constants | None = None) -> Fraction:
    k = constants or default_constants()
    table = _table(k)
    for u in (from_unit, to_unit):
        if u not in table:
            raise UnitError(f"unknown unit {u!r}")
    (d1, f1), (d2, f2) = table[from_unit], table[to_unit]
    if d1 == d2:
        return f1 / f2
    if {d1, d2} == {"length", "time"}:
        # light-travel conversion, base units m and s
        return f1 / f2 / k.c if d1 == "length" else f1 * k.c / f2
    raise UnitError(f"cannot convert {d1} ({from_unit}) to {d2} ({to_unit})")


def units_convert(value, from_unit: str, to_unit: str, constants: Constants | None = None):
    """Convert ``value``; exact (Fraction) for int/Fraction/str input, float otherwise."""
    f = conversion_factor(from_unit, to_unit, constants)
    if isinstance(value, (int, Fraction)):
        return Fraction(value) * f
    if isinstance(value, str):
        return Fraction(value) * f
    return float(value) * float(f)


def dimension(unit: str) -> str:
    table = _table(default_constants())
    if unit not in table:
        raise UnitError(f"unknown unit {unit!r}")
    return table[unit][0]
