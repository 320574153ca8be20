import itertools
import random
import time
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings

from conftest import polynomials
from symplectic_mdr.series import Polynomial, TruncatedSeries, monomial, poly_derive
from symplectic_mdr.star import (
    DarbouxChart,
    StarProduct,
    c_r,
    check_associativity,
    check_berezin,
    check_symmetry,
    lift,
    random_polynomial,
    star,
    star_commutator,
    star_exponential,
    star_power,
)

q, p, s = Polynomial.var("q"), Polynomial.var("p"), Polynomial.var("s")
ZERO, ONE = Polynomial.zero(), Polynomial.one()


def brute_c_r(chart, r, f, g):
    """Ordered-index sum (1/r!) sum w^{i1 j1}...w^{ir jr} d_I f d_J g over the full Poisson matrix."""
    names = chart.names
    w = chart.omega_poisson
    d = len(names)
    total = ZERO
    for idx in itertools.product(range(d), repeat=2 * r):
        I, Jx = idx[:r], idx[r:]
        coeff = Fraction(1)
        for a, b in zip(I, Jx):
            coeff *= w[a][b]
        if coeff == 0:
            continue
        fa, gb = f, g
        for a in I:
            fa = poly_derive(fa, names[a])
        for b in Jx:
            gb = poly_derive(gb, names[b])
        total = total + (fa * gb).scale(coeff)
    return total.scale(Fraction(1, factorial(r)))


def test_c_r_examples():
    sp = StarProduct(DarbouxChart(1), order=4)
    assert c_r(sp, 1, q, p) == ONE
    assert c_r(sp, 2, q**2, p**2) == Polynomial.const(2)
    f = q**3 * p + q
    for r in range(1, 5):
        assert c_r(sp, r, f, ONE).is_zero()
    assert c_r(sp, 0, f, q) == f * q
    with pytest.raises(ValueError):
        c_r(sp, 5, q, p)


@pytest.mark.parametrize("n,scale", [(1, 1), (2, 1), (1, Fraction(-3, 2))])
def test_c_r_matches_ordered_index_oracle(n, scale):
    chart = DarbouxChart(n, scale)
    sp = StarProduct(chart, order=3)
    rng = random.Random(f"oracle:{n}:{scale}")
    for _ in range(8):
        f = random_polynomial(rng, chart.names, 3)
        g = random_polynomial(rng, chart.names, 3)
        for r in range(4):
            assert c_r(sp, r, f, g) == brute_c_r(chart, r, f, g)


def test_star_canonical_pair():
    sp = StarProduct(DarbouxChart(1), order=2)
    qp = star(sp, q, p)
    assert qp.re[0] == q * p and qp.im[1] == Polynomial.const(Fraction(1, 2))
    assert qp.re[1].is_zero() and qp.re[2].is_zero() and qp.im[2].is_zero()
    comm = star_commutator(sp, q, p)
    assert comm == TruncatedSeries(2, [], [ZERO, ONE], sp.chart.variables)


def test_star_unit():
    sp = StarProduct(DarbouxChart(1), order=4)
    f = q**2 * p - q + 3
    assert star(sp, f, ONE) == lift(sp, f)
    assert star(sp, ONE, f) == lift(sp, f)


def test_star_rejects_foreign_variables():
    sp = StarProduct(DarbouxChart(1), order=2)
    with pytest.raises(ValueError):
        star(sp, Polynomial.var("z"), q)


def test_star_power_examples():
    sp = StarProduct(DarbouxChart(1), order=4)
    assert star_power(sp, p, 2) == lift(sp, p**2)
    assert star_power(sp, q, 0) == TruncatedSeries.unit(4, sp.chart.variables)
    # (qp)*(qp): C1 = 0 by antisymmetry, C2 = (1/2)(-1) + ... -> q^2 p^2 + t^2/4
    got = star_power(sp, q * p, 2)
    assert got.re[0] == q**2 * p**2
    assert got.re[2] == Polynomial.const(Fraction(1, 4))
    assert all(got.re[r].is_zero() and got.im[r].is_zero() for r in (1, 3, 4))
    assert got.im[0].is_zero() and got.im[2].is_zero()


def test_star_power_matches_direct_product():
    sp = StarProduct(DarbouxChart(1), order=3)
    f = q * p + q**2
    assert star_power(sp, f, 2) == star(sp, f, f).truncate(3)


def test_star_exponential_linear():
    sp = StarProduct(DarbouxChart(1), order=4)
    e = star_exponential(sp, s * p, 6)
    assert e.re[0] == ONE + (s * p) ** 4 * Fraction(1, 24) - (s * p) ** 2 * Fraction(1, 2)
    assert e.im[0].coefficient(monomial(s=3, p=3)) == Fraction(-1, 6)
    assert e.im[0].coefficient(monomial(s=1, p=1)) == 1
    assert star_exponential(sp, ZERO, 4) == TruncatedSeries.unit(4, sp.chart.variables)


def test_berezin_report():
    rep = check_berezin(StarProduct(DarbouxChart(1), order=4), terms=6)
    assert rep.passed
    assert rep.details["cubic_imag_coefficient"] == "-1/6"


def test_symmetry_all_grades():
    sp = StarProduct(DarbouxChart(2), order=4)
    for r in range(5):
        assert check_symmetry(sp, r, 30, seed=1).passed


def test_associativity_examples():
    sp2 = StarProduct(DarbouxChart(1), order=2)
    assert check_associativity(sp2, 0, triples=[(q, p, q)]).passed
    sp0 = StarProduct(DarbouxChart(2), order=0)
    assert check_associativity(sp0, 20, seed=4).passed


def test_associativity_random_order4():
    sp = StarProduct(DarbouxChart(2), order=4)
    rep = check_associativity(sp, 25, seed=5)
    assert rep.passed and rep.samples == 25


def test_corrupted_c2_fails_at_grade_2():
    sp = StarProduct(DarbouxChart(2), order=4, corrupt_c2=True)
    rep = check_associativity(sp, 50, seed=0)
    assert not rep.passed
    assert rep.counterexample["grade"] == 2


def test_poisson_bracket_at_grade_one():
    sp = StarProduct(DarbouxChart(1), order=2)
    rng = random.Random(9)
    for _ in range(10):
        f = random_polynomial(rng, ("q", "p"))
        g = random_polynomial(rng, ("q", "p"))
        pb = poly_derive(f, "q") * poly_derive(g, "p") - poly_derive(f, "p") * poly_derive(g, "q")
        comm = star_commutator(sp, f, g)
        assert comm.re[1].is_zero()
        assert comm.im[1] == pb


@settings(max_examples=25, deadline=None)
@given(polynomials(), polynomials())
def test_hermitian(f, g):
    sp = StarProduct(DarbouxChart(1), order=3)
    assert star(sp, f, g).conj() == star(sp, g, f)


def test_scaled_chart_commutator():
    chart = DarbouxChart(1, Fraction(1, 3))
    sp = StarProduct(chart, order=1)
    assert star_commutator(sp, q, p).im[1] == Polynomial.const(Fraction(1, 3))


def test_chart_defaults():
    chart = DarbouxChart(2)
    assert chart.q == ("q1", "q2") and chart.p == ("p1", "p2")
    assert chart.omega_poisson[0][2] == 1 and chart.omega_poisson[2][0] == -1
    with pytest.raises(ValueError):
        DarbouxChart(0)
