"""Exact sparse polynomials and truncated series in a deformation parameter.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable
name, with no zero exponents; the constant monomial is ``()``.  Coefficients
are :class:`fractions.Fraction` throughout, so every identity checked on
these objects is an exact equality.

:class:`TruncatedSeries` carries the grading by powers of the deformation
parameter ``t`` separately from the polynomial variables.  Each graded
coefficient is a Gaussian-rational polynomial stored as a real part and an
imaginary part.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import factorial
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[tuple[str, int], ...]

ONE_MONO: Monomial = ()


def monomial(**exponents: int) -> Monomial:
    """Canonical monomial from keyword exponents, e.g. ``monomial(q=2, p=1)``."""
    for v, e in exponents.items():
        if e < 0:
            raise ValueError(f"negative exponent for {v!r}")
    return tuple(sorted((v, e) for v, e in exponents.items() if e))


def mono_degree(m: Monomial, variables=None) -> int:
    if variables is None:
        return sum(e for _, e in m)
    return sum(e for v, e in m if v in variables)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")


class Polynomial:
    """Immutable multivariate polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[tuple(m)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        # caller guarantees canonical monomials and no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls({ONE_MONO: c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Polynomial":
        return cls({monomial(**{name: power}): 1})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls._raw({ONE_MONO: Fraction(1)})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE_MONO, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, variables=None) -> int:
        """Total degree (in ``variables`` if given); ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        return max(mono_degree(m, variables) for m in self._terms)

    def degree_in(self, v: str) -> int:
        return self.degree((v,))

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.const(_as_fraction(other))

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero()
        return Polynomial._raw({m: c * a for m, a in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = mono_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        c = _as_fraction(c)
        if not c:
            raise ZeroDivisionError("polynomial divided by zero")
        return self.scale(1 / c)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        try:
            return self._terms == Polynomial.const(_as_fraction(other))._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # calculus and substitution -----------------------------------------

    def derive(self, v: str) -> "Polynomial":
        return poly_derive(self, v)

    def truncate(self, degree: int, variables=None) -> "Polynomial":
        """Drop every term of total degree above ``degree`` (in ``variables``)."""
        return Polynomial._raw(
            {m: c for m, c in self._terms.items() if mono_degree(m, variables) <= degree}
        )

    def substitute(self, v: str, value) -> "Polynomial":
        """Replace variable ``v`` by a rational or a polynomial."""
        value = self._coerce(value)
        out = Polynomial.zero()
        powers = {0: Polynomial.one()}
        for m, c in self._terms.items():
            e = dict(m).get(v, 0)
            if e not in powers:
                powers[e] = value ** e
            rest = Polynomial._raw({tuple(x for x in m if x[0] != v): c})
            out = out + rest * powers[e]
        return out

    def evaluate(self, values: Mapping[str, object]):
        total = 0
        for m, c in self._terms.items():
            term = c
            for v, e in m:
                term = term * values[v] ** e
            total = total + term
        return total

    def divide_monomial(self, m: Monomial) -> "Polynomial":
        """Exact division by a monomial; raises if some term is not divisible."""
        need = dict(m)
        out = {}
        for mono, c in self._terms.items():
            have = dict(mono)
            for v, e in need.items():
                if have.get(v, 0) < e:
                    raise ValueError("polynomial not divisible by monomial")
                have[v] -= e
            out[tuple(sorted((v, e) for v, e in have.items() if e))] = c
        return Polynomial._raw(out)

    # display ------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: (mono_degree(mc[0]), mc[0]))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return poly_to_json(self)


def poly_derive(p: Polynomial, v: str) -> Polynomial:
    """Exact partial derivative of ``p`` with respect to ``v``."""
    out = {}
    for m, c in p.items():
        for idx, (var, e) in enumerate(m):
            if var == v:
                if e == 1:
                    nm = m[:idx] + m[idx + 1:]
                else:
                    nm = m[:idx] + ((var, e - 1),) + m[idx + 1:]
                out[nm] = c * e
                break
    return Polynomial._raw(out)


def poly_derive_multi(p: Polynomial, orders: Mapping[str, int]) -> Polynomial:
    for v, k in orders.items():
        for _ in range(k):
            if p.is_zero():
                return p
            p = poly_derive(p, v)
    return p


# ---------------------------------------------------------------------------
# Gaussian-rational scalars


def gauss(re=0, im=0) -> tuple[Fraction, Fraction]:
    return (_as_fraction(re), _as_fraction(im))


def i_power(n: int) -> tuple[Fraction, Fraction]:
    """``i**n`` as a (re, im) pair."""
    return [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
            (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1))][n % 4]


class TruncatedSeries:
    """Series ``sum_r t**r (re[r] + i*im[r])`` truncated after ``t**order``.

    ``variables`` optionally names the registry of polynomial variables the
    series lives over; combining series with different registries is an
    error.
    """

    __slots__ = ("order", "re", "im", "variables")

    def __init__(self, order: int, re: Sequence[Polynomial] = (), im: Sequence[Polynomial] = (),
                 variables: Iterable[str] | None = None):
        if order < 0:
            raise ValueError("order must be non-negative")
        re = list(re)[: order + 1]
        im = list(im)[: order + 1]
        re += [Polynomial.zero()] * (order + 1 - len(re))
        im += [Polynomial.zero()] * (order + 1 - len(im))
        self.order = order
        self.re = tuple(re)
        self.im = tuple(im)
        self.variables = None if variables is None else frozenset(variables)

    @classmethod
    def constant(cls, p: Polynomial | int | Fraction, order: int, variables=None):
        if not isinstance(p, Polynomial):
            p = Polynomial.const(p)
        return cls(order, [p], [], variables)

    @classmethod
    def unit(cls, order: int, variables=None):
        return cls.constant(Polynomial.one(), order, variables)

    def coefficient(self, r: int) -> tuple[Polynomial, Polynomial]:
        return self.re[r], self.im[r]

    def _registry(self, other: "TruncatedSeries"):
        if self.variables is None:
            return other.variables
        if other.variables is None or other.variables == self.variables:
            return self.variables
        raise ValueError(
            f"variable registry mismatch: {sorted(self.variables)} vs {sorted(other.variables)}"
        )

    def __add__(self, other: "TruncatedSeries"):
        reg = self._registry(other)
        n = min(self.order, other.order)
        return TruncatedSeries(
            n,
            [self.re[r] + other.re[r] for r in range(n + 1)],
            [self.im[r] + other.im[r] for r in range(n + 1)],
            reg,
        )

    def __neg__(self):
        return TruncatedSeries(self.order, [-x for x in self.re], [-x for x in self.im], self.variables)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return NotImplemented

    def scale(self, re=1, im=0) -> "TruncatedSeries":
        """Multiply by the Gaussian rational ``re + i*im``."""
        a, b = _as_fraction(re), _as_fraction(im)
        return TruncatedSeries(
            self.order,
            [x * a - y * b for x, y in zip(self.re, self.im)],
            [x * b + y * a for x, y in zip(self.re, self.im)],
            self.variables,
        )

    def conj(self) -> "TruncatedSeries":
        return TruncatedSeries(self.order, self.re, [-y for y in self.im], self.variables)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(min(order, self.order), self.re, self.im, self.variables)

    def is_real(self) -> bool:
        return all(y.is_zero() for y in self.im)

    def first_difference(self, other: "TruncatedSeries") -> int | None:
        """Lowest grade where the two series differ, or ``None``."""
        n = min(self.order, other.order)
        for r in range(n + 1):
            if self.re[r] != other.re[r] or self.im[r] != other.im[r]:
                return r
        return None

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.order, self.re, self.im))

    def __repr__(self):
        parts = []
        for r in range(self.order + 1):
            x, y = self.re[r], self.im[r]
            if x.is_zero() and y.is_zero():
                continue
            parts.append(f"t^{r}*[({x}) + i*({y})]")
        return f"TruncatedSeries(order={self.order}: " + (" + ".join(parts) or "0") + ")"

    def to_json(self) -> dict:
        return series_to_json(self)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product in the deformation grading, truncated at the smaller order."""
    reg = a._registry(b)
    n = min(a.order, b.order)
    re = [Polynomial.zero() for _ in range(n + 1)]
    im = [Polynomial.zero() for _ in range(n + 1)]
    for r in range(n + 1):
        ar, ai = a.re[r], a.im[r]
        if ar.is_zero() and ai.is_zero():
            continue
        for s in range(n + 1 - r):
            br, bi = b.re[s], b.im[s]
            if br.is_zero() and bi.is_zero():
                continue
            re[r + s] = re[r + s] + ar * br - ai * bi
            im[r + s] = im[r + s] + ar * bi + ai * br
    return TruncatedSeries(n, re, im, reg)


# ---------------------------------------------------------------------------
# analytic functions


def taylor_coefficients(name: str, n: int) -> list[Fraction]:
    """First ``n + 1`` Maclaurin coefficients of a named function.

    Supported: ``exp``, ``sin``, ``cos``, ``sin2`` (sin squared), ``sinh``,
    ``cosh``.
    """
    out = []
    for k in range(n + 1):
        f = Fraction(1, factorial(k))
        if name == "exp":
            out.append(f)
        elif name == "sin":
            out.append(f * (-1) ** (k // 2) if k % 2 else Fraction(0))
        elif name == "cos":
            out.append(Fraction(0) if k % 2 else f * (-1) ** (k // 2))
        elif name == "sinh":
            out.append(f if k % 2 else Fraction(0))
        elif name == "cosh":
            out.append(Fraction(0) if k % 2 else f)
        elif name == "sin2":
            # sin^2 x = sum_{m>=1} (-1)^(m+1) 2^(2m-1) x^(2m) / (2m)!
            if k == 0 or k % 2:
                out.append(Fraction(0))
            else:
                m = k // 2
                out.append(Fraction((-1) ** (m + 1) * 2 ** (2 * m - 1), factorial(k)))
        else:
            raise ValueError(f"unknown analytic function {name!r}")
    return out


def expand_analytic(taylor_coeffs: Sequence, arg: Polynomial, order: int,
                    degree_vars: Iterable[str] | None = None) -> Polynomial:
    """Compose ``sum_n c_n * arg**n`` truncated at total degree ``order``.

    Degree is counted in ``degree_vars`` (default: every variable of ``arg``),
    so parameters such as a length scale can be excluded from the count.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if arg.constant_term():
        raise ValueError("argument must have zero constant term")
    dv = None if degree_vars is None else frozenset(degree_vars)
    coeffs = [_as_fraction(c) for c in taylor_coeffs]
    result = Polynomial.const(coeffs[0]) if coeffs else Polynomial.zero()
    if arg.is_zero():
        return result
    low = min(mono_degree(m, dv) for m, _ in arg.items())
    if low == 0:
        raise ValueError("argument has terms of degree zero in the counted variables")
    power = Polynomial.one()
    for n in range(1, len(coeffs)):
        if n * low > order:
            break
        power = (power * arg).truncate(order, dv)
        if coeffs[n]:
            result = result + power.scale(coeffs[n])
    return result


# ---------------------------------------------------------------------------
# canonical JSON


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _mono_key(m: Monomial) -> str:
    return "*".join(f"{v}^{e}" for v, e in m) or "1"


def poly_to_json(p: Polynomial) -> dict:
    terms = sorted(p.items(), key=lambda mc: _mono_key(mc[0]))
    return {"terms": [{"monomial": {v: e for v, e in m}, "coeff": _frac_str(c)} for m, c in terms]}


def poly_from_json(obj: Mapping) -> Polynomial:
    return Polynomial({monomial(**t["monomial"]): Fraction(t["coeff"]) for t in obj["terms"]})


def series_to_json(s: TruncatedSeries) -> dict:
    out = {
        "order": s.order,
        "re": [poly_to_json(x) for x in s.re],
        "im": [poly_to_json(y) for y in s.im],
    }
    if s.variables is not None:
        out["variables"] = sorted(s.variables)
    return out


def series_from_json(obj: Mapping) -> TruncatedSeries:
    return TruncatedSeries(
        obj["order"],
        [poly_from_json(x) for x in obj["re"]],
        [poly_from_json(y) for y in obj["im"]],
        obj.get("variables"),
    )


def dumps(obj) -> str:
    """Canonical JSON text for a polynomial or series."""
    return json.dumps(obj.to_json(), sort_keys=True, separators=(",", ":"))
