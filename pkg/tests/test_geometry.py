import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trace_sharp.geometry import (
    HalfMoonParams,
    cap_angle,
    in_theta,
    in_xi,
    measure_arrays,
    measures,
    removed_ball,
)
from trace_sharp.special import constants, psi


@st.composite
def upsilon(draw, n=None):
    th = draw(st.floats(1e-3, math.pi - 1e-3))
    ph = draw(st.floats(0.0, 1.0)) * th * (1 - 1e-9)
    dim = n if n is not None else draw(st.integers(2, 8))
    return HalfMoonParams(th, ph, dim)


def test_half_disk():
    m = measures(HalfMoonParams(math.pi / 2, 0.0, 2))
    assert m.boundary_share == pytest.approx(math.pi, rel=1e-15)
    assert m.relative_perimeter == pytest.approx(2.0, rel=1e-15)
    assert m.volume == pytest.approx(math.pi / 2, rel=1e-15)


def test_half_ball_n3_equatorial_disk():
    m = measures(HalfMoonParams(math.pi / 2, 0.0, 3))
    assert m.relative_perimeter == pytest.approx(math.pi, rel=1e-15)


def test_positive_varphi_perimeter_formula():
    p = HalfMoonParams(2.0, 0.7, 4)
    c = constants(4)
    expected = 3 * c.omega_nm1 * psi(2, 0.7) * (math.sin(2.0) / math.sin(0.7)) ** 3
    assert measures(p).relative_perimeter == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("n", range(2, 9))
def test_complement_consistency_grid(n):
    th = np.linspace(0.01, math.pi - 0.01, 100)
    frac = np.linspace(0.0, 0.99, 100)
    T, F = np.meshgrid(th, frac, indexing="ij")
    share, perim, vol, cvol, rest = measure_arrays(T, T * F, n)
    c = constants(n)
    assert np.max(np.abs(vol + cvol - c.omega_n)) <= 1e-12 * c.omega_n
    assert np.max(np.abs(share + rest - c.sphere_area)) <= 1e-12 * c.sphere_area
    assert np.all(share >= 0) and np.all(perim > 0) and np.all(vol > 0) and np.all(cvol > 0)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_share_increases_in_theta(n):
    th = np.linspace(0.05, 3.0, 200)
    share = measure_arrays(th, np.full_like(th, 0.04), n)[0]
    assert np.all(np.diff(share) > 0)


@pytest.mark.parametrize("n", range(2, 9))
def test_varphi_zero_continuity(n):
    for th in (0.5, math.pi / 2, 2.5):
        a = measures(HalfMoonParams(th, 0.0, n))
        b = measures(HalfMoonParams(th, 1e-8, n))
        for x, y in zip(
            (a.boundary_share, a.relative_perimeter, a.volume, a.complement_volume),
            (b.boundary_share, b.relative_perimeter, b.volume, b.complement_volume),
        ):
            assert y == pytest.approx(x, rel=1e-6)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_cap_angle_round_trip(n):
    for beta in np.linspace(0.01, 0.99, 100):
        th = cap_angle(beta, n)
        assert abs(psi(n, th) - beta * psi(n, math.pi)) <= 1e-11


def test_cap_angle_examples():
    for n in range(2, 9):
        assert cap_angle(0.5, n) == pytest.approx(math.pi / 2, abs=1e-14)
    # theta - sin(theta) cos(theta) = pi/4, solved independently
    from scipy.optimize import bisect

    ref = bisect(lambda t: t - math.sin(t) * math.cos(t) - math.pi / 4, 0.0, math.pi, xtol=1e-15)
    assert cap_angle(0.25, 2) == pytest.approx(ref, abs=1e-12)
    betas = [0.9, 0.99, 0.999, 0.9999]
    ths = [cap_angle(b, 2) for b in betas]
    assert all(a < b < math.pi for a, b in zip(ths, ths[1:]))


@pytest.mark.parametrize("beta", [0.0, 1.0, -0.1, 1.5])
def test_cap_angle_domain(beta):
    with pytest.raises(ValueError):
        cap_angle(beta, 2)


def test_in_theta():
    assert in_theta(HalfMoonParams(math.pi / 2, 0.0))
    assert not in_theta(HalfMoonParams(math.pi / 4, 0.0))
    assert in_theta(HalfMoonParams(3 * math.pi / 4, math.pi / 4))


def test_in_xi():
    hb = HalfMoonParams(math.pi / 2, 0.0, 2)
    assert in_xi(hb, 0.5)
    assert not in_xi(hb, 0.25)
    assert in_xi(HalfMoonParams(1e-6, 0.0, 3), 0.01)


@pytest.mark.parametrize("th, ph", [(0.0, 0.0), (math.pi, 0.1), (1.0, 1.0), (1.0, -0.1)])
def test_measures_domain(th, ph):
    with pytest.raises(ValueError):
        measures(HalfMoonParams(th, ph, 2))


def test_removed_ball():
    cx, r = removed_ball(HalfMoonParams(2.0, 0.5, 2))
    # the meeting point lies on both spheres
    m = np.array([math.cos(2.0), math.sin(2.0)])
    assert np.hypot(m[0] - cx, m[1]) == pytest.approx(r, rel=1e-14)
    with pytest.raises(ValueError):
        removed_ball(HalfMoonParams(2.0, 0.0, 2))


@given(upsilon())
def test_measures_invariants(p):
    m = measures(p)
    c = constants(p.n)
    assert min(m.boundary_share, m.relative_perimeter, m.volume, m.complement_volume) >= 0
    assert abs(m.volume + m.complement_volume - c.omega_n) <= 1e-12 * c.omega_n
    assert m.boundary_share <= c.sphere_area * (1 + 1e-15)


@given(upsilon(n=2))
def test_complement_round_trip(p):
    m = measures(p)
    back = m.complement(2).complement(2)
    assert back == m
