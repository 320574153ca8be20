import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from symplectic_mdr import linalg as la
from symplectic_mdr.enclosure import (
    Interval,
    count_roots,
    largest_real_root,
    sqrt_enclosure,
    sturm_sequence,
)
from symplectic_mdr.symplectic import (
    SIGMA_MOYAL,
    SIGMA_POLYMER,
    SymplecticData,
    ell_star_squared,
    orientation_sigma,
    validate,
)

OMEGA = [[0, 1], [-1, 0]]
J = [[0, -1], [1, 0]]


def data(omega, j, sigma=1):
    return SymplecticData(la.mat(omega), la.mat(j), sigma)


def test_validate_canonical():
    rep = validate(data(OMEGA, J))
    assert rep.ok and all(rep.checks.values())


def test_validate_identity_j_fails():
    rep = validate(data(OMEGA, [[1, 0], [0, 1]]))
    assert not rep.checks["J_squared_is_minus_identity"]
    assert not rep.ok


def test_validate_metric_not_positive():
    rep = validate(data(OMEGA, OMEGA))
    assert rep.checks["J_squared_is_minus_identity"]
    assert not rep.checks["metric_positive_definite"]
    assert rep.first_bad_minor == 1
    # g = omega J = -1 by hand
    assert SymplecticData(la.mat(OMEGA), la.mat(OMEGA)).metric == la.neg(la.identity(2))


def test_validate_dimension_errors():
    with pytest.raises(ValueError):
        validate(SymplecticData(la.mat(OMEGA), la.identity(4)))
    with pytest.raises(ValueError):
        validate(SymplecticData(la.identity(3), la.identity(3)))


def test_ell_star_canonical_and_scaling():
    assert ell_star_squared(data(OMEGA, J)).ell_star_sq == 1
    for s in (Fraction(2), Fraction(3), Fraction(1, 5), Fraction(7, 3)):
        g = ell_star_squared(SymplecticData.canonical(1, s))
        assert g.exact and g.ell_star_sq == 1 / s


def test_ell_star_block_max_rule():
    for s1, s2 in [(1, 2), (3, Fraction(1, 2)), (Fraction(1, 4), Fraction(1, 3))]:
        om = la.block_diag(la.scale(la.mat(OMEGA), s1), la.scale(la.mat(OMEGA), s2))
        j = la.block_diag(la.mat(J), la.mat(J))
        assert ell_star_squared(SymplecticData(om, j)).ell_star_sq == max(Fraction(1, s1), Fraction(1, s2))


def test_ell_star_irrational_enclosure():
    # omega^-1 J = [[-1, 1], [1, -2]] has norm (3 + sqrt 5)/2
    j = [[1, -2], [1, -1]]
    res = ell_star_squared(data(OMEGA, j))
    assert isinstance(res.ell_star_sq, Interval)
    assert res.ell_star_sq.width <= Fraction(1, 10**20)
    oracle = np.linalg.norm(np.linalg.inv(np.array(OMEGA, float)) @ np.array(j, float), 2)
    assert float(res.ell_star_sq.lo) <= oracle + 1e-12 and oracle - 1e-12 <= float(res.ell_star_sq.hi)


def test_ell_star_rejects_invalid():
    with pytest.raises(ValueError):
        ell_star_squared(data(OMEGA, OMEGA))


def test_orientation_sigma():
    assert orientation_sigma(data(OMEGA, J, SIGMA_POLYMER)) == -1
    assert orientation_sigma(data(OMEGA, J, SIGMA_MOYAL)) == 1
    assert orientation_sigma(SymplecticData.canonical()) == 1
    # det J = +1 for any almost-complex structure, so sigma cannot come from it
    assert la.det(la.mat(J)) == 1 and la.det(la.mat([[1, -2], [1, -1]])) == 1


def test_json_roundtrip():
    d = SymplecticData.canonical(2, Fraction(3, 7), -1)
    assert SymplecticData.from_json(d.to_json()) == d


def _signed_perms(n):
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            yield la.signed_permutation(perm, signs)


def test_ell_star_invariant_under_orthogonal_conjugation():
    rng = random.Random(7)
    om = la.block_diag(la.mat(OMEGA), la.scale(la.mat(OMEGA), 3))
    j = la.block_diag(la.mat(J), la.mat(J))
    base = SymplecticData(om, j)
    ref = ell_star_squared(base).ell_star_sq
    perms = list(_signed_perms(4))
    for S in rng.sample(perms, 40):
        conj = base.conjugate(S)
        assert validate(conj).ok
        assert ell_star_squared(conj).ell_star_sq == ref


def test_ell_star_matches_float_oracle_random():
    rng = random.Random(11)
    for _ in range(20):
        s1 = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        s2 = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        om = la.block_diag(la.scale(la.mat(OMEGA), s1), la.scale(la.mat(OMEGA), s2))
        j = la.block_diag(la.mat(J), la.mat(J))
        got = ell_star_squared(SymplecticData(om, j)).ell_star_sq
        m = np.linalg.inv(np.array(om, float)) @ np.array(j, float)
        assert float(got) == pytest.approx(np.linalg.norm(m, 2), rel=1e-12)


def test_charpoly_and_inverse_against_numpy():
    rng = random.Random(3)
    for _ in range(10):
        a = la.mat([[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(4)] for _ in range(4)])
        cp = la.charpoly(a)
        ref = np.poly(np.array(a, float))[::-1]
        assert np.allclose([float(c) for c in cp], ref, atol=1e-8)
        if la.det(a) != 0:
            assert la.matmul(a, la.inverse(a)) == la.identity(4)


def test_sturm_root_counting():
    # (x - 1)(x - 2)(x + 3), lowest degree first
    poly = [6, -7, 0, 1]
    seq = sturm_sequence([Fraction(c) for c in poly])
    assert count_roots(seq, Fraction(-10), Fraction(10)) == 3
    assert count_roots(seq, Fraction(0), Fraction(3, 2)) == 1
    assert largest_real_root(poly) == 2


def test_sqrt_enclosure():
    iv = sqrt_enclosure(2, Fraction(1, 10**12))
    assert iv.lo**2 <= 2 <= iv.hi**2
    assert iv.width <= Fraction(1, 10**12)
    assert sqrt_enclosure(Fraction(9, 4)).is_exact
