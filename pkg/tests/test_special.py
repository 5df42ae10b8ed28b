import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trace_sharp.special import (
    adaptive_simpson,
    constants,
    omega,
    phi,
    phi_quadrature_oracle,
    psi,
    psi_quadrature_oracle,
    psi_ratio,
)

angles = st.floats(0.0, math.pi, allow_nan=False)
orders = st.integers(0, 14)

# values from 30-digit mpmath quadrature
FROZEN_PSI = [
    (5, math.pi / 3, 0.11041666666666666667),
    (7, 1.0, 0.048862311530552743475),
    (12, 2.5, 0.70858193226150466382),
    (9, math.pi, 0.81269841269841269841),
]
FROZEN_PHI = [
    (5, math.pi / 3, 0.53044055981796867114),
    (7, 1.0, 0.45610446513367895113),
    (12, 2.5, 0.36087788207176585239),
]


@pytest.mark.parametrize(
    "k, t, expected",
    [(0, math.pi / 2, math.pi / 2), (1, math.pi, 2.0), (3, math.pi, 4.0 / 3.0)],
)
def test_psi_examples(k, t, expected):
    assert psi(k, t) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize(
    "k, t, expected",
    [(0, math.pi / 4, math.pi / 4), (1, math.pi / 2, 1.0), (2, math.pi / 2, math.pi / 4)],
)
def test_phi_examples(k, t, expected):
    assert phi(k, t) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("k, t, expected", FROZEN_PSI)
def test_psi_frozen(k, t, expected):
    assert psi(k, t) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("k, t, expected", FROZEN_PHI)
def test_phi_frozen(k, t, expected):
    assert phi(k, t) == pytest.approx(expected, abs=1e-14)


def test_oracle_examples():
    assert psi_quadrature_oracle(0, 1.0) == pytest.approx(1.0, abs=1e-13)
    assert psi_quadrature_oracle(2, math.pi) == pytest.approx(math.pi / 2, abs=1e-13)
    assert abs(psi_quadrature_oracle(5, math.pi / 3) - psi(5, math.pi / 3)) <= 1e-12


def test_adaptive_simpson_symmetric_integrand():
    # coarse symmetric panels agree by accident here; forced splits catch it
    val = adaptive_simpson(lambda x: math.cos(x) ** 4, 0.0, math.pi)
    assert val == pytest.approx(3 * math.pi / 8, abs=1e-13)


def test_recurrence_vs_oracle_grid():
    ts = np.linspace(0.0, math.pi, 200)[::7]
    for k in range(13):
        for t in ts:
            assert abs(psi(k, t) - psi_quadrature_oracle(k, t)) <= 1e-12
            assert abs(phi(k, t) - phi_quadrature_oracle(k, t)) <= 1e-12


def test_array_matches_scalar():
    ts = np.linspace(0.0, math.pi, 37)
    for k in (0, 1, 4, 7):
        arr = psi(k, ts)
        assert arr.shape == ts.shape
        assert np.array_equal(arr, [psi(k, t) for t in ts])
        assert np.array_equal(phi(k, ts), [phi(k, t) for t in ts])


def test_tiny_angles_keep_relative_accuracy():
    # leading term t**(k+1) / (k+1)
    for k in (2, 4, 8):
        t = 1e-8
        assert psi(k, t) == pytest.approx(t ** (k + 1) / (k + 1), rel=1e-12)
    assert psi_ratio(3, 0.0) == 0.25


@pytest.mark.parametrize("bad", [-1e-9, math.pi + 1e-9, float("nan")])
def test_domain_errors(bad):
    with pytest.raises(ValueError):
        psi(2, bad)
    with pytest.raises(ValueError):
        phi(2, bad)


def test_bad_order():
    with pytest.raises(ValueError):
        psi(-1, 1.0)
    with pytest.raises(ValueError):
        psi(1.5, 1.0)


def test_psi_ratio_rejects_pi():
    with pytest.raises(ValueError):
        psi_ratio(2, math.pi)


@given(orders, angles, angles)
def test_psi_nonneg_nondecreasing(k, a, b):
    lo, hi = sorted((a, b))
    assert psi(k, lo) >= 0.0
    assert psi(k, hi) >= psi(k, lo) - 1e-15


@given(orders, angles)
def test_reflection_identity(k, t):
    assert abs(psi(k, math.pi) - psi(k, t) - psi(k, math.pi - t)) <= 1e-12


@given(orders, st.floats(math.pi / 2, math.pi))
def test_odd_part_identity(k, t):
    lhs = psi(k, t) - psi(k, math.pi - t)
    assert abs(lhs - 2 * phi(k, t - math.pi / 2)) <= 1e-12


@pytest.mark.parametrize("n", range(2, 13))
def test_ball_volume_identities(n):
    c = constants(n)
    assert abs(c.omega_n - c.omega_nm1 * psi(n, math.pi)) <= 1e-12 * c.omega_n
    lhs = n * c.omega_n
    assert abs(lhs - (n - 1) * c.omega_nm1 * psi(n - 2, math.pi)) <= 1e-12 * lhs


def test_constants_examples():
    assert constants(2).a_n == pytest.approx(math.pi, rel=1e-15)
    assert constants(3).a_n == pytest.approx(4.0, rel=1e-15)
    assert constants(2).C_n == pytest.approx(8 / math.pi**2, rel=1e-15)
    assert omega(2) == pytest.approx(math.pi, rel=1e-15)
    assert omega(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert constants(3).k_mv == pytest.approx(2.0, rel=1e-15)


@pytest.mark.parametrize("n", range(2, 51))
def test_constant_invariants(n):
    c = constants(n)
    assert c.a_n > 2
    assert c.b_n > 6
    assert n * c.C_n / (n + 2) < 1
    assert constants(n + 2).a_n == pytest.approx(c.a_n * (n + 1) / n, rel=1e-14)
    assert c.sphere_area == pytest.approx(n * c.omega_n)


def test_constants_domain():
    with pytest.raises(ValueError):
        constants(1)
