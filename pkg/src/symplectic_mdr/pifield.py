"""Exact scalars in Q(pi): rational functions of a formal, positive pi.

Backed by sympy's fraction-field domains.  Numbers leave this field only
through :func:`enclose` (certified rational interval, substituting a
36-digit enclosure of pi) or :func:`to_float`.
"""

from __future__ import annotations

from fractions import Fraction

import sympy
from sympy import QQ
from sympy.polys.polyerrors import CoercionFailed

from .enclosure import DEFAULT_WIDTH, PI as PI_INTERVAL, Interval, sqrt_enclosure

PI = sympy.Symbol("pi", positive=True)
FIELD = QQ.frac_field(PI)


def make_field(*symbols):
    """Fraction field over Q in ``pi`` plus extra symbols (for symbolic checks)."""
    return QQ.frac_field(PI, *symbols)


def _locals(field):
    return {str(s): s for s in field.symbols}


def parse(value, field=FIELD):
    """Field element from an int, Fraction, sympy expression or string like ``"1/(4*pi)"``."""
    if isinstance(value, Fraction):
        return field.convert(QQ(value.numerator, value.denominator))
    if isinstance(value, int):
        return field.convert(QQ(value))
    if isinstance(value, str):
        value = sympy.sympify(value, locals=_locals(field), rational=True)
    if isinstance(value, sympy.Basic):
        return field.from_sympy(value)
    try:
        return field.convert(value)
    except CoercionFailed as exc:
        raise TypeError(f"cannot interpret {value!r} as an exact scalar") from exc


def to_sympy(x, field=FIELD):
    return field.to_sympy(x)


def to_str(x, field=FIELD) -> str:
    return str(field.to_sympy(x))


def is_constant(x) -> bool:
    return x.numer.is_ground and x.denom.is_ground


def to_fraction(x) -> Fraction:
    """Rational value of a constant element."""
    if not is_constant(x):
        raise ValueError("element depends on a symbol")
    n = x.numer.LC if x.numer else 0
    d = x.denom.LC
    return _frac(n) / _frac(d)


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _eval_poly(poly, point: Interval) -> Interval:
    total = Interval.point(0)
    for monom, coeff in poly.terms():
        k = monom[0] if monom else 0
        total = total + point**k * _frac(coeff)
    return total


def enclose(x, field=FIELD) -> Interval:
    """Certified interval for an element of Q(pi)."""
    if len(field.symbols) != 1 or field.symbols[0] != PI:
        if not is_constant(x):
            raise ValueError("only elements of Q(pi) can be enclosed numerically")
    if is_constant(x):
        return Interval.point(to_fraction(x))
    return _eval_poly(x.numer, PI_INTERVAL) / _eval_poly(x.denom, PI_INTERVAL)


def to_float(x, field=FIELD) -> float:
    return float(enclose(x, field))


def sign(x, field=FIELD) -> int:
    """Sign of an element, decided exactly or through its enclosure."""
    if not x:
        return 0
    iv = enclose(x, field)
    if iv.lo > 0:
        return 1
    if iv.hi < 0:
        return -1
    raise ValueError("sign undecided at the available precision of pi")


def sqrt_exact(x, field=FIELD):
    """Square root inside the field when ``x`` is a perfect square, else ``None``."""
    if not x:
        return x
    r = sympy.sqrt(sympy.factor(field.to_sympy(x)))
    try:
        return field.from_sympy(r)
    except (CoercionFailed, ValueError):
        return None


def sqrt(x, field=FIELD, width=DEFAULT_WIDTH):
    """Exact root when available, otherwise a certified enclosure (``None`` if symbolic)."""
    r = sqrt_exact(x, field)
    if r is not None:
        return r
    try:
        iv = enclose(x, field)
    except ValueError:
        return None
    lo = sqrt_enclosure(max(iv.lo, Fraction(0)), width).lo
    return Interval(lo, sqrt_enclosure(iv.hi, width).hi)
