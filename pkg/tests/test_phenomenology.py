import math

import mpmath
import numpy as np
import pytest

from symplectic_mdr import phenomenology as ph
from symplectic_mdr.units import UnitError, default_constants, units_convert

C = float(default_constants().c)
# mpmath oracle at 50 digits: m = 0, sigma = -1, ell_star_sq = 1, p_high = 1e-3, T = 1e17 s
TOF_GOLDEN = -50000048611.164583395399379804938812778067604219372


def test_energy_examples():
    d = ph.Dispersion(0.5, 1.0, 1)
    assert ph.energy(d, 0.0) == 0.5
    d0 = ph.Dispersion(0.5, 0.0, 1)
    assert ph.energy(d0, 2.0) == pytest.approx(math.hypot(2.0, 0.5), rel=1e-15)
    d3 = ph.Dispersion(0.0, 3.0, 1)
    assert ph.energy(d3, 0.1) == pytest.approx(0.10049876, abs=5e-9)
    assert ph.energy(d3, 0.1) == pytest.approx(math.sqrt(0.0101), rel=1e-15)


def test_domain_errors():
    d = ph.Dispersion(0.0, 1.0, -1)
    with pytest.raises(ph.DomainError, match="exceeds"):
        ph.energy(d, 1.0)
    with pytest.raises(ph.DomainError):
        ph.energy(d, -0.1)
    loose = ph.Dispersion(0.0, 1.0, -1, threshold=10.0)
    with pytest.raises(ph.DomainError, match="turns over"):
        ph.energy(loose, 2.0)
    with pytest.raises(ValueError):
        ph.Dispersion(-1.0, 1.0, 1)
    with pytest.raises(ValueError):
        ph.Dispersion(0.0, 1.0, 0)


def _grid(d, n=50):
    return np.linspace(d.p_ceiling * 0.02, d.p_ceiling * 0.98, n)


@pytest.mark.parametrize("m,l2,sigma", [(0.0, 1.0, 1), (0.0, 1.0, -1), (0.3, 2.0, 1), (0.3, 0.5, -1)])
def test_group_velocity_vs_finite_difference(m, l2, sigma):
    d = ph.Dispersion(m, l2, sigma)
    for p in _grid(d):
        h = p * 1e-5
        fd = (ph.energy(d, p + h) - ph.energy(d, p - h)) / (2 * h)
        assert abs(ph.group_velocity(d, p) - fd) <= 1e-6 * abs(fd)


def test_group_velocity_examples():
    d = ph.Dispersion(0.0, 0.0, 1)
    assert np.all(ph.group_velocity(d, np.array([0.0, 1.0, 10.0])) == 1.0)
    assert ph.group_velocity(ph.Dispersion(1.0, 1.0, 1), 0.0) == 0.0
    l2 = 1.0
    p = math.sqrt(1e-4 / l2)
    d = ph.Dispersion(0.0, l2, 1)
    h = p * 1e-5
    fd = (ph.energy(d, p + h) - ph.energy(d, p - h)) / (2 * h)
    assert ph.group_velocity(d, p) == pytest.approx(fd, rel=1e-6)
    assert ph.group_velocity(d, p) - 1 == pytest.approx(l2 * p * p / 2, rel=1e-3)


def test_branch_signs():
    for sigma, cmp in ((1, np.greater), (-1, np.less)):
        d = ph.Dispersion(0.0, 1.0, sigma)
        assert np.all(cmp(ph.velocity_shift(d, _grid(d)), 0.0))


def test_excess_functions_consistent():
    d = ph.Dispersion(0.2, 1.5, -1)
    p = _grid(d, 20)
    v = ph.group_velocity(d, p)
    assert np.allclose(ph.inverse_velocity_excess(d, p), 1 / v - 1, rtol=1e-9, atol=0)
    assert np.allclose(ph.velocity_shift(d, p), v - 1, rtol=1e-9, atol=0)


def test_momentum_roundtrip():
    for d in (ph.Dispersion(0.0, 1.0, 1), ph.Dispersion(0.0, 1.0, -1), ph.Dispersion(0.4, 2.0, -1)):
        for p in _grid(d):
            assert ph.momentum(d, ph.energy(d, p)) == pytest.approx(p, rel=1e-10)
    with pytest.raises(ph.DomainError):
        ph.momentum(ph.Dispersion(1.0, 0.0, 1), 0.5)


def channel(T=1e17, e_high=1e-3, e_low=0.0, bound=1.0):
    return ph.ObservationChannel(C * T, e_high, e_low, bound)


def test_tof_trivial_cases():
    assert ph.time_of_flight_delay(ph.Dispersion(0.0, 0.0, 1), channel()) == 0.0
    d = ph.Dispersion(0.0, 1.0, 1)
    assert ph.time_of_flight_delay(d, ph.ObservationChannel(C, 1e-3, 1e-3 * (1 - 1e-16), 1.0)) == pytest.approx(0.0, abs=1e-20)


def test_tof_golden_mpmath():
    got = ph.time_of_flight_delay(ph.Dispersion(0.0, 1.0, -1), channel())
    assert got == pytest.approx(TOF_GOLDEN, rel=1e-12)
    # leading order: |dt| ~ T l2 p^2 / 2
    assert abs(got) == pytest.approx(1e17 * 1e-6 / 2, rel=1e-5)


def test_tof_oracle_live():
    mpmath.mp.dps = 40
    l2, E, T = mpmath.mpf(2), mpmath.mpf("3e-3"), mpmath.mpf("1e15")

    def energy(x):
        return mpmath.sqrt(x**2 + l2 * x**4 / 3)

    p = mpmath.findroot(lambda x: energy(x) - E, E)
    v = mpmath.diff(energy, p)
    want = float(T * (1 - 1 / v))
    got = ph.time_of_flight_delay(ph.Dispersion(0.0, 2.0, 1), channel(T=1e15, e_high=3e-3))
    assert got == pytest.approx(want, rel=1e-10)


def test_tof_linear_in_distance():
    d = ph.Dispersion(0.0, 1.0, 1)
    for T in (1.0, 3.7e9, 1e17):
        a = ph.time_of_flight_delay(d, channel(T=T))
        b = ph.time_of_flight_delay(d, channel(T=2 * T))
        assert b == 2 * a


def test_tof_monotone_in_scale():
    ch = channel()
    vals = [abs(ph.time_of_flight_delay(ph.Dispersion(0.0, l2, -1), ch)) for l2 in np.linspace(0, 1e4, 30)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def unit_channel(T=1e17, p_high=1e-5):
    return ph.ObservationChannel(C * T, p_high, 0.0, T * p_high**2 / 2)


@pytest.mark.parametrize("sigma", [1, -1])
def test_invert_bound_unit_channel(sigma):
    res = ph.invert_bound(unit_channel(), sigma)
    assert not res.unconstrained
    assert res.ell_star_sq_bound == pytest.approx(1.0, rel=1e-9)


def test_invert_bound_distance_scaling():
    bound = 1e16 * 1e-10 / 2
    a = ph.invert_bound(ph.ObservationChannel(C * 1e16, 1e-5, 0.0, bound), 1).ell_star_sq_bound
    b = ph.invert_bound(ph.ObservationChannel(C * 2e16, 1e-5, 0.0, bound), 1).ell_star_sq_bound
    assert b == pytest.approx(a / 2, rel=1e-8)


def test_invert_bound_unconstrained():
    ch = ph.ObservationChannel(C * 1.0, 1e-5, 0.0, 1e30)
    res = ph.invert_bound(ch, -1)
    assert res.unconstrained
    assert res.ell_star_sq_bound <= 0.1 / 1e-10


def test_invert_bound_planck_units():
    # same channel expressed in GeV: bound in GeV^-2, reported also in l_P^2
    ep = float(default_constants().planck_energy_GeV)
    ch = ph.ObservationChannel(C * 1e17, 1e-5 * ep, 0.0, 1e17 * 1e-10 / 2)
    res = ph.invert_bound(ch, 1, energy_unit="GeV")
    assert res.ell_star_sq_bound_in_planck_units == pytest.approx(1.0, rel=1e-9)


def test_channel_from_json():
    obj = {"name": "grb", "distance": {"value": 1.0, "unit": "Gpc"},
           "e_high": {"value": 10.0, "unit": "TeV"}, "e_low": {"value": 1.0, "unit": "GeV"},
           "delta_t_bound": {"value": 1.0, "unit": "s"}}
    ch = ph.ObservationChannel.from_json(obj)
    assert ch.e_high == pytest.approx(1e4 / 1.220890e19, rel=1e-12)
    assert ch.distance == pytest.approx(3.0856775814913673e25)
    bad = dict(obj, e_high={"value": 1.0, "unit": "m"})
    with pytest.raises(ValueError):
        ph.ObservationChannel.from_json(bad)
    with pytest.raises(UnitError):
        ph.ObservationChannel.from_json(dict(obj, e_low={"value": 1.0, "unit": "furlong"}))


def test_channel_invariants():
    with pytest.raises(ValueError):
        ph.ObservationChannel(1.0, 1.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        ph.ObservationChannel(0.0, 2.0, 1.0, 1.0)


def test_units_examples():
    assert units_convert(10, "TeV", "GeV") == 10000
    assert float(units_convert(1, "l_P", "m")) == 1.616255e-35
    assert float(units_convert(10, "TeV", "E_P")) == pytest.approx(8.2e-16, rel=0.01)
    with pytest.raises(UnitError):
        units_convert(1, "GeV", "s")


def test_benchmark_shift_discrepancy():
    b = ph.benchmark_shift()
    e = 1e4 / 1.220890e19
    assert b["computed_dv"] == pytest.approx(e * e / 2, rel=1e-6)
    assert 1e-31 < b["computed_dv"] < 1e-30
    assert b["discrepancy"] is True


def test_dispersion_table():
    rows = ph.dispersion_table(ph.Dispersion(0.0, 1.0, 1), [0.0, 0.1], travel_time=10.0)
    assert rows[0] == {"p": 0.0, "E": 0.0, "v": 1.0, "dt": -0.0}
    assert rows[1]["dt"] > 0
