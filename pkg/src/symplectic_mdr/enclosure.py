"""Rational intervals, exact square roots and root isolation by Sturm bisection."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

DEFAULT_WIDTH = Fraction(1, 10**20)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __float__(self):
        return float(self.mid)

    def _iv(self, other) -> "Interval":
        return other if isinstance(other, Interval) else Interval.point(other)

    def __add__(self, other):
        o = self._iv(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._iv(other))

    def __rsub__(self, other):
        return self._iv(other) - self

    def __mul__(self, other):
        o = self._iv(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._iv(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return self._iv(other) / self

    def __pow__(self, n: int):
        out = Interval.point(1)
        for _ in range(n):
            out = out * self
        if n % 2 == 0 and self.lo < 0 < self.hi:
            out = Interval(0, out.hi)
        return out

    def sqrt(self, width=DEFAULT_WIDTH) -> "Interval":
        if self.lo < 0:
            raise ValueError("square root of an interval reaching below zero")
        return Interval(sqrt_enclosure(self.lo, width).lo, sqrt_enclosure(self.hi, width).hi)

    def __repr__(self):
        if self.is_exact:
            return f"Interval({self.lo})"
        return f"Interval([{float(self.lo):.17g}, {float(self.hi):.17g}])"


# 36 significant digits of pi, truncated and rounded up.
PI = Interval(Fraction(314159265358979323846264338327950288, 10**35),
              Fraction(314159265358979323846264338327950289, 10**35))


def exact_sqrt(x) -> Fraction | None:
    """Square root of a non-negative rational when it is rational, else ``None``."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_enclosure(x, width=DEFAULT_WIDTH) -> Interval:
    """Certified enclosure of ``sqrt(x)``; a point interval when the root is rational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    r = exact_sqrt(x)
    if r is not None:
        return Interval.point(r)
    # dyadic grid of spacing 2**-k, fine enough for the requested width
    k = 1
    while Fraction(1, 2**k) > Fraction(width):
        k += 1
    scaled = x * 4**k
    lo = isqrt(scaled.numerator // scaled.denominator)
    return Interval(Fraction(lo, 2**k), Fraction(lo + 1, 2**k))


# ---------------------------------------------------------------------------
# univariate polynomials as coefficient lists, lowest degree first


def upoly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_eval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def upoly_deriv(a):
    return upoly_trim([i * a[i] for i in range(1, len(a))])


def upoly_divmod(a, b):
    a, b = upoly_trim(a), upoly_trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = [Fraction(c) for c in a]
    lead = Fraction(b[-1])
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] -= f * c
        r = upoly_trim(r)
    return upoly_trim(q), r


def upoly_gcd(a, b):
    a, b = upoly_trim(a), upoly_trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    if not a:
        return a
    return [c / a[-1] for c in a]


def squarefree(a):
    g = upoly_gcd(a, upoly_deriv(a))
    if len(g) <= 1:
        return upoly_trim(a)
    return upoly_divmod(a, g)[0]


def sturm_sequence(a):
    seq = [upoly_trim(a), upoly_deriv(a)]
    while seq[-1]:
        r = upoly_divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(seq, x) -> int:
    signs = [s for s in (upoly_eval(p, x) for p in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u < 0) != (v < 0))


def count_roots(seq, lo, hi) -> int:
    """Distinct real roots in ``(lo, hi]`` of the square-free head of ``seq``."""
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def cauchy_bound(a) -> Fraction:
    a = upoly_trim(a)
    lead = abs(Fraction(a[-1]))
    return 1 + max((abs(Fraction(c)) / lead for c in a[:-1]), default=Fraction(0))


def largest_real_root(a, width=DEFAULT_WIDTH) -> Fraction | Interval:
    """Largest real root of a rational polynomial.

    Returns the exact root when it is rational; otherwise a certified
    enclosure narrower than ``width``.
    """
    p = squarefree([Fraction(c) for c in a])
    if len(p) < 2:
        raise ValueError("polynomial has no roots")
    seq = sturm_sequence(p)
    hi = cauchy_bound(p)
    lo = -hi
    if count_roots(seq, lo, hi) == 0:
        raise ValueError("polynomial has no real roots")
    # a rational root n/d of the integer-normalized polynomial has d | lead
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    lead = abs(int(p[-1] * den))
    sep = Fraction(1, 2 * lead * lead)
    tried = False
    while True:
        # invariant: the largest root lies in (lo, hi]
        if upoly_eval(p, hi) == 0:
            return hi
        if hi - lo < sep and not tried:
            tried = True
            cand = ((lo + hi) / 2).limit_denominator(lead)
            if lo < cand <= hi and upoly_eval(p, cand) == 0:
                return cand
        if tried and hi - lo < Fraction(width):
            return Interval(lo, hi)
        mid = (lo + hi) / 2
        if count_roots(seq, mid, hi) > 0:
            lo = mid
        else:
            hi = mid

