"""Quartic heat-kernel coefficient from flat-space operator symbols.

Sign convention: the symbol of ``-d^2`` is ``+k^2``.  A squared operator
with symbol ``k^2 + c4 k^4 + m^2`` therefore has ``a4 = c4``, so the polymer
dispersion ``k^2 - (lam^2/3) k^4`` gives ``a4 = -lam^2/3`` and the Moyal one
``k^2 + (|theta|/3) k^4`` gives ``a4 = +|theta|/3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import pifield
from .background import Realization, check_dispersion_shape, realization_dispersion
from .reports import Report
from .series import Polynomial, monomial


@dataclass(frozen=True)
class OperatorSymbol:
    symbol: Polynomial
    mass_sq: Fraction = Fraction(0)

    def __post_init__(self):
        c0 = self.symbol.constant_term()
        if c0:
            # fold a constant term into the mass
            object.__setattr__(self, "symbol", self.symbol - c0)
            object.__setattr__(self, "mass_sq", Fraction(self.mass_sq) + c0)
        else:
            object.__setattr__(self, "mass_sq", Fraction(self.mass_sq))
        check_dispersion_shape(self.symbol)

    @classmethod
    def from_realization(cls, r: Realization, order: int = 4, mass_sq=0) -> "OperatorSymbol":
        return cls(realization_dispersion(r, order), Fraction(mass_sq))


@dataclass(frozen=True)
class A4Result:
    a4: Fraction
    sigma: int
    ell_star_sq: Fraction

    def to_json(self, realization: str | None = None) -> dict:
        out = {"a4": str(self.a4), "sigma": self.sigma,
               "ell_star_sq": str(self.ell_star_sq)}
        if realization is not None:
            out = {"realization": realization, **out}
        return out


def a4_from_symbol(op: OperatorSymbol) -> A4Result:
    c4 = op.symbol.coefficient(monomial(k=4))
    sigma = -1 if c4 < 0 else 1
    return A4Result(c4, sigma, 3 * abs(c4))


def gilkey_a4_flat(E, volume):
    """Constant-endomorphism flat-space value ``volume * 180 E^2 / (360 (4 pi)^2)``.

    Returned as an element of Q(pi); ``volume`` may itself involve pi.
    """
    E = pifield.parse(E if not isinstance(E, float) else Fraction(E))
    vol = pifield.parse(volume)
    if pifield.sign(vol) <= 0:
        raise ValueError("volume must be positive")
    four_pi = 4 * pifield.parse(pifield.PI)
    return vol * 180 * E**2 / (360 * four_pi**2)


@dataclass
class ScaleMatch:
    match: bool
    ell_star_sq: Fraction | None
    opposite_signs: bool
    ratio: Fraction | None

    def to_json(self) -> dict:
        return {
            "match": self.match,
            "ell_star_sq": None if self.ell_star_sq is None else str(self.ell_star_sq),
            "opposite_signs": self.opposite_signs,
            "ratio": None if self.ratio is None else str(self.ratio),
        }


def scale_matching(a4_st, a4_lqg) -> ScaleMatch:
    """Compare ``|a4|`` across the two realizations; equal magnitudes fix ``ell_star_sq = 3 |a4|``."""
    st, lqg = Fraction(a4_st), Fraction(a4_lqg)
    match = abs(st) == abs(lqg)
    ratio = abs(st / lqg) if lqg else None
    return ScaleMatch(
        match=match,
        ell_star_sq=3 * abs(st) if match else None,
        opposite_signs=st == -lqg,
        ratio=ratio,
    )


def a4_report(realizations) -> Report:
    """``a4`` of each realization against ``sigma * scale_sq / 3``."""
    rows, ok = [], True
    for r in realizations:
        res = a4_from_symbol(OperatorSymbol.from_realization(r))
        good = res.a4 == r.sigma * r.scale_sq / 3
        ok &= good
        rows.append({**res.to_json(r.name), "consistent": good})
    return Report("a4_consistency", None, len(rows), "pass" if ok else "fail", details={"rows": rows})
