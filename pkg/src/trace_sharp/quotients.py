"""Isoperimetric quotients on subsets of the unit ball."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import _check_upsilon
from .special import constants, phi, psi, psi_ratio

__all__ = [
    "MEAN_VALUE",
    "MEDIAN",
    "QuotientValue",
    "g_med",
    "g_med_array",
    "q_med",
    "q_mv",
    "q_mv_array",
    "q_mv_closed_form",
]

MEAN_VALUE = "mean-value"
MEDIAN = "median"


@dataclass(frozen=True)
class QuotientValue:
    value: float
    kind: str

    def __post_init__(self):
        if self.kind not in (MEAN_VALUE, MEDIAN):
            raise ValueError(f"unknown quotient kind {self.kind!r}")

    def __float__(self):
        return float(self.value)


def q_mv(m, n):
    """Mean-value quotient of a set from its :class:`SetMeasures`.

    ``(|E| H(dB \\ dE) + |B \\ E| H(dE & dB)) / (|B| P(E; B))``.  The two
    products are summed in an order-independent way, so swapping a set for
    its complement (:meth:`SetMeasures.complement`) returns the identical
    float.
    """
    if m.relative_perimeter == 0:
        raise ZeroDivisionError("relative perimeter is zero (degenerate set)")
    c = constants(n)
    top = m.volume * m.rest(n) + m.complement_volume * m.boundary_share
    return QuotientValue(top / (c.omega_n * m.relative_perimeter), MEAN_VALUE)


def q_med(m):
    """Median quotient: boundary share over relative perimeter."""
    if m.relative_perimeter == 0:
        raise ZeroDivisionError("relative perimeter is zero (degenerate set)")
    return QuotientValue(m.boundary_share / m.relative_perimeter, MEDIAN)


def q_mv_array(theta, varphi, n):
    """Closed-form mean-value quotient of ``E(theta, varphi)`` on arrays.

    Valid on the reduced domain ``theta >= pi/2``.  The numerator
    ``n w_n^2 - 4 (n-1) w_{n-1}^2 Phi_{n-2}(t) (Phi_n(t) - removed)`` with
    ``t = theta - pi/2`` tends to zero as theta -> pi, so each cosine
    integral is split as ``Phi_k(pi/2) - d_k`` with ``d_k = psi(k, pi - theta)``;
    the leading products cancel exactly and what remains is a sum of
    nonnegative terms.
    """
    th, ph = _check_upsilon(theta, varphi)
    if np.any(th < math.pi / 2):
        raise ValueError("closed-form mean-value quotient needs theta >= pi/2")
    c = constants(n)
    w, wm = c.omega_n, c.omega_nm1
    u = math.pi - th
    st = np.sin(th)
    removed = psi_ratio(n, ph) * np.sin(ph) * st**n
    full_lo = phi(n - 2, math.pi / 2)
    full_hi = phi(n, math.pi / 2)
    d_lo = np.asarray(psi(n - 2, u))
    d_hi = np.asarray(psi(n, u)) + removed
    top = 4 * (n - 1) * wm * wm * (full_lo * d_hi + d_lo * (full_hi - d_hi))
    bottom = 2 * (n - 1) * wm * w * psi_ratio(n - 2, ph) * st ** (n - 1)
    return top / bottom


def q_mv_closed_form(p):
    return QuotientValue(float(q_mv_array(p.theta, p.varphi, p.n)), MEAN_VALUE)


def g_med_array(theta, varphi, n):
    """``psi(n-2, theta) sin(varphi)**(n-1) / (psi(n-2, varphi) sin(theta)**(n-1))``.

    At ``varphi = 0`` this is the cap value ``(n-1) psi(n-2, theta) / sin(theta)**(n-1)``.
    """
    th, ph = _check_upsilon(theta, varphi)
    return np.asarray(psi(n - 2, th)) / (psi_ratio(n - 2, ph) * np.sin(th) ** (n - 1))


def g_med(p):
    return QuotientValue(float(g_med_array(p.theta, p.varphi, p.n)), MEDIAN)
