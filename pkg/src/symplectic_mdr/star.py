"""Moyal star product on flat Darboux charts.

The product is ``f * g = sum_r (i t / 2)**r C_r(f, g)`` where ``t`` stands
for the geometric scale and

    C_r(f, g) = (1/r!) sum omega^{i1 j1} ... omega^{ir jr}
                (d_{i1} ... d_{ir} f) (d_{j1} ... d_{jr} g).

Because the Poisson tensor is constant the derivatives commute, and the
sum collapses to a multinomial over the nonzero tensor entries; that is how
:func:`c_r` evaluates it.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .reports import Report
from .series import Polynomial, TruncatedSeries, i_power, monomial, poly_derive_multi

DEFAULT_ORDER = 4


@dataclass(frozen=True)
class DarbouxChart:
    """Coordinates ``q1..qn, p1..pn`` with Poisson tensor ``scale * [[0, I], [-I, 0]]``.

    ``parameters`` are inert symbols (formal scales such as ``s``) that may
    appear in polynomials but are never differentiated.
    """

    n: int = 1
    scale: Fraction = Fraction(1)
    parameters: tuple = ("s",)
    names: tuple | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("chart needs at least one degree of freedom")
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale == 0:
            raise ValueError("Poisson tensor scale must be nonzero")
        if self.names is None:
            if self.n == 1:
                names = ("q", "p")
            else:
                names = tuple(f"q{i + 1}" for i in range(self.n)) + tuple(f"p{i + 1}" for i in range(self.n))
            object.__setattr__(self, "names", names)
        if len(self.names) != 2 * self.n:
            raise ValueError("need 2n coordinate names")
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if set(self.names) & set(self.parameters):
            raise ValueError("parameters overlap coordinate names")

    @property
    def q(self) -> tuple:
        return self.names[: self.n]

    @property
    def p(self) -> tuple:
        return self.names[self.n:]

    @property
    def variables(self) -> frozenset:
        return frozenset(self.names) | frozenset(self.parameters)

    @property
    def omega_poisson(self) -> tuple:
        """The 2n x 2n Poisson tensor as a matrix of Fractions."""
        d = 2 * self.n
        rows = [[Fraction(0)] * d for _ in range(d)]
        for i in range(self.n):
            rows[i][self.n + i] = self.scale
            rows[self.n + i][i] = -self.scale
        return tuple(tuple(r) for r in rows)

    def poisson_entries(self):
        """Nonzero entries ``(var_i, var_j, omega^{ij})``."""
        out = []
        for qi, pi in zip(self.q, self.p):
            out.append((qi, pi, self.scale))
            out.append((pi, qi, -self.scale))
        return tuple(out)

    def coordinate(self, name: str) -> Polynomial:
        if name not in self.names:
            raise KeyError(name)
        return Polynomial.var(name)

    def check_variables(self, *polys: Polynomial):
        for f in polys:
            extra = f.variables() - self.variables
            if extra:
                raise ValueError(f"foreign variables {sorted(extra)} not on this chart")


@dataclass(frozen=True)
class StarProduct:
    chart: DarbouxChart = field(default_factory=DarbouxChart)
    order: int = DEFAULT_ORDER
    corrupt_c2: bool = False  # mutation-testing switch: halves C_2

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")


def _multisets(entries, r):
    """Multisets of size ``r`` over ``entries`` with weight prod(w**k / k!)."""
    for combo in combinations_with_replacement(range(len(entries)), r):
        counts = Counter(combo)
        weight = Fraction(1)
        df: Counter = Counter()
        dg: Counter = Counter()
        for idx, k in counts.items():
            vi, vj, w = entries[idx]
            weight *= w**k / factorial(k)
            df[vi] += k
            dg[vj] += k
        yield weight, df, dg


def c_r(sp: StarProduct, r: int, f: Polynomial, g: Polynomial) -> Polynomial:
    """The r-th Moyal bidifferential coefficient ``C_r(f, g)``."""
    if not 0 <= r <= sp.order:
        raise ValueError(f"r = {r} outside 0..{sp.order}")
    return _c_r(sp.chart, r, f, g, sp.corrupt_c2)


def _c_r(chart: DarbouxChart, r: int, f: Polynomial, g: Polynomial, corrupt=False) -> Polynomial:
    if r == 0:
        return f * g
    if f.is_zero() or g.is_zero():
        return Polynomial.zero()
    cache_f: dict = {}
    cache_g: dict = {}
    total = Polynomial.zero()
    for weight, df, dg in _multisets(chart.poisson_entries(), r):
        kf = tuple(sorted(df.items()))
        kg = tuple(sorted(dg.items()))
        if kf not in cache_f:
            cache_f[kf] = poly_derive_multi(f, df)
        if kg not in cache_g:
            cache_g[kg] = poly_derive_multi(g, dg)
        a, b = cache_f[kf], cache_g[kg]
        if a.is_zero() or b.is_zero():
            continue
        total = total + (a * b).scale(weight)
    if corrupt and r == 2:
        total = total.scale(Fraction(1, 2))
    return total


def _grade_factor(r: int) -> tuple[Fraction, Fraction]:
    """``(i/2)**r`` as a (re, im) pair."""
    re, im = i_power(r)
    return re / 2**r, im / 2**r


def star(sp: StarProduct, f: Polynomial, g: Polynomial) -> TruncatedSeries:
    """``f * g`` as a series in ``t`` (the geometric scale)."""
    sp.chart.check_variables(f, g)
    re, im = [], []
    for r in range(sp.order + 1):
        c = _c_r(sp.chart, r, f, g, sp.corrupt_c2)
        a, b = _grade_factor(r)
        re.append(c.scale(a))
        im.append(c.scale(b))
    return TruncatedSeries(sp.order, re, im, sp.chart.variables)


def lift(sp: StarProduct, f: Polynomial) -> TruncatedSeries:
    sp.chart.check_variables(f)
    return TruncatedSeries.constant(f, sp.order, sp.chart.variables)


def star_series(sp: StarProduct, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Bilinear extension of the star product to complex graded series."""
    a._registry(b)
    n = min(a.order, b.order, sp.order)
    re = [Polynomial.zero() for _ in range(n + 1)]
    im = [Polynomial.zero() for _ in range(n + 1)]
    for ra in range(n + 1):
        ar, ai = a.re[ra], a.im[ra]
        if ar.is_zero() and ai.is_zero():
            continue
        for sb in range(n + 1 - ra):
            br, bi = b.re[sb], b.im[sb]
            if br.is_zero() and bi.is_zero():
                continue
            for k in range(n + 1 - ra - sb):
                cr = _c_r(sp.chart, k, ar, br, sp.corrupt_c2) - _c_r(sp.chart, k, ai, bi, sp.corrupt_c2)
                ci = _c_r(sp.chart, k, ar, bi, sp.corrupt_c2) + _c_r(sp.chart, k, ai, br, sp.corrupt_c2)
                if cr.is_zero() and ci.is_zero():
                    continue
                x, y = _grade_factor(k)
                g = ra + sb + k
                re[g] = re[g] + cr.scale(x) - ci.scale(y)
                im[g] = im[g] + cr.scale(y) + ci.scale(x)
    return TruncatedSeries(n, re, im, sp.chart.variables)


def star_commutator(sp: StarProduct, f: Polynomial, g: Polynomial) -> TruncatedSeries:
    return star(sp, f, g) - star(sp, g, f)


def star_power(sp: StarProduct, f: Polynomial, n: int) -> TruncatedSeries:
    """Left-associated ``f * f * ... * f`` (n factors); the unit for ``n = 0``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    sp.chart.check_variables(f)
    out = TruncatedSeries.unit(sp.order, sp.chart.variables)
    fs = lift(sp, f)
    for _ in range(n):
        out = star_series(sp, out, fs)
    return out


def star_exponential(sp: StarProduct, f: Polynomial, terms: int) -> TruncatedSeries:
    """``sum_{n < terms} i**n f^{*n} / n!``.

    ``f`` should carry an explicit formal scale (a chart parameter such as
    ``s``) so that truncating after ``terms`` is meaningful.
    """
    if terms < 1:
        raise ValueError("terms must be at least 1")
    sp.chart.check_variables(f)
    fs = lift(sp, f)
    power = TruncatedSeries.unit(sp.order, sp.chart.variables)
    total = power
    for n in range(1, terms):
        power = star_series(sp, power, fs)
        re, im = i_power(n)
        total = total + power.scale(re / factorial(n), im / factorial(n))
    return total


# ---------------------------------------------------------------------------
# randomized verification


def random_polynomial(rng: random.Random, variables, max_degree: int = 3, n_terms: int = 4,
                      coeff_range: int = 9) -> Polynomial:
    """Random polynomial with small rational coefficients."""
    variables = tuple(variables)
    terms = {}
    for _ in range(n_terms):
        deg = rng.randint(0, max_degree)
        exps: Counter = Counter(rng.choice(variables) for _ in range(deg))
        num = rng.randint(-coeff_range, coeff_range)
        den = rng.randint(1, 4)
        terms[monomial(**exps)] = Fraction(num, den)
    return Polynomial(terms)


def _poly_str(p: Polynomial) -> str:
    return repr(p)


def check_symmetry(sp: StarProduct, r: int, samples: int, seed: int = 0,
                   max_degree: int = 3) -> Report:
    """Parity of ``C_r``: symmetric for even r, antisymmetric for odd r."""
    if not 0 <= r <= sp.order:
        raise ValueError(f"r = {r} outside 0..{sp.order}")
    rng = random.Random(f"symmetry:{seed}:{r}")
    sign = -1 if r % 2 else 1
    for _ in range(samples):
        f = random_polynomial(rng, sp.chart.names, max_degree)
        g = random_polynomial(rng, sp.chart.names, max_degree)
        lhs = c_r(sp, r, f, g)
        rhs = c_r(sp, r, g, f).scale(sign)
        if lhs != rhs:
            return Report(f"symmetry_r{r}", sp.order, samples, "fail",
                          counterexample={"f": _poly_str(f), "g": _poly_str(g)})
    return Report(f"symmetry_r{r}", sp.order, samples, "pass",
                  details={"parity": "antisymmetric" if r % 2 else "symmetric"})


def check_associativity(sp: StarProduct, samples: int, seed: int = 0, max_degree: int = 3,
                        triples=None) -> Report:
    """``(f*g)*h == f*(g*h)`` through ``sp.order`` on random (or given) triples."""
    rng = random.Random(f"associativity:{seed}")
    if triples is None:
        triples = (
            tuple(random_polynomial(rng, sp.chart.names, max_degree) for _ in range(3))
            for _ in range(samples)
        )
    count = 0
    for f, g, h in triples:
        count += 1
        left = star_series(sp, star(sp, f, g), lift(sp, h))
        right = star_series(sp, lift(sp, f), star(sp, g, h))
        grade = left.first_difference(right)
        if grade is not None:
            return Report("associativity", sp.order, count, "fail",
                          counterexample={"f": _poly_str(f), "g": _poly_str(g), "h": _poly_str(h),
                                          "grade": grade})
    return Report("associativity", sp.order, count, "pass")


def check_berezin(sp: StarProduct, terms: int = 6) -> Report:
    """Star exponential of ``i s p`` against the ordinary exponential series.

    On a flat chart the star powers of a linear function are pointwise
    powers, so ``exp_*(i s p)`` must equal ``sum (i s p)**n / n!``.  The cubic
    coefficient is also compared with ``-sigma * i * p**3 / 6`` at sigma = +1.
    """
    p = sp.chart.coordinate(sp.chart.p[0])
    s = Polynomial.var(sp.chart.parameters[0])
    got = star_exponential(sp, s * p, terms)
    want_re, want_im = [Polynomial.zero()], [Polynomial.zero()]
    for n in range(terms):
        re, im = i_power(n)
        term = (s * p) ** n
        want_re[0] = want_re[0] + term.scale(re / factorial(n))
        want_im[0] = want_im[0] + term.scale(im / factorial(n))
    want = TruncatedSeries(sp.order, want_re, want_im, sp.chart.variables)
    grade = got.first_difference(want)
    cubic = got.im[0].coefficient(monomial(**{sp.chart.parameters[0]: 3, sp.chart.p[0]: 3}))
    cubic_ok = terms <= 3 or cubic == Fraction(-1, 6)
    status = "pass" if grade is None and cubic_ok else "fail"
    details = {"terms": terms, "cubic_imag_coefficient": str(cubic), "sigma": 1}
    if grade is not None:
        return Report("berezin", sp.order, 1, status, counterexample={"grade": grade}, details=details)
    return Report("berezin", sp.order, 1, status, details=details)
