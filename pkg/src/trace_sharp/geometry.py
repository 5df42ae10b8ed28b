"""The half-moon family ``E(theta, varphi)``: the unit ball minus another ball.

``theta`` is the angle between the positive x1 half-axis and the radius of the
unit ball through a point M where the two spheres meet; ``varphi`` is the
angle between the same half-axis and the radius of the removed ball through
M.  ``varphi = 0`` is the limiting case in which the removed ball becomes a
half-space and ``E`` is the spherical cap ``{x1 > cos(theta)}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .special import constants, psi, psi_ratio

__all__ = [
    "HalfMoonParams",
    "SetMeasures",
    "VOLUME_SLACK",
    "cap_angle",
    "in_theta",
    "in_upsilon",
    "in_xi",
    "measures",
    "measure_arrays",
    "removed_ball",
]

VOLUME_SLACK = 1e-12


@dataclass(frozen=True)
class HalfMoonParams:
    theta: float
    varphi: float
    n: int = 2


@dataclass(frozen=True)
class SetMeasures:
    """Boundary share on the sphere, relative perimeter, volume, complement volume.

    ``boundary_rest`` is the sphere area not covered by the boundary share.
    Sources that know it accurately (the half-moon closed forms) fill it in;
    otherwise it is derived by subtraction, which loses relative accuracy
    when the share covers nearly the whole sphere.
    """

    boundary_share: float
    relative_perimeter: float
    volume: float
    complement_volume: float
    boundary_rest: float | None = None

    def rest(self, n):
        if self.boundary_rest is not None:
            return self.boundary_rest
        return constants(n).sphere_area - self.boundary_share

    def complement(self, n):
        """Measures of ``B^n \\ E``; the relative perimeter is shared."""
        return SetMeasures(
            boundary_share=self.rest(n),
            relative_perimeter=self.relative_perimeter,
            volume=self.complement_volume,
            complement_volume=self.volume,
            boundary_rest=self.boundary_share,
        )


def in_upsilon(theta, varphi):
    return 0.0 < theta < math.pi and 0.0 <= varphi < theta


def in_theta(p):
    """Membership of the reduced domain {pi/2 <= theta < pi, 0 <= varphi < theta}."""
    return math.pi / 2 <= p.theta < math.pi and 0.0 <= p.varphi < p.theta


def _check_upsilon(theta, varphi):
    th = np.asarray(theta, dtype=float)
    ph = np.asarray(varphi, dtype=float)
    ok = (th > 0) & (th < math.pi) & (ph >= 0) & (ph < th)
    if not np.all(ok):
        raise ValueError(
            f"(theta, varphi) must satisfy 0 < theta < pi, 0 <= varphi < theta; "
            f"got ({theta!r}, {varphi!r})"
        )
    return th, ph


def measure_arrays(theta, varphi, n):
    """Vectorised form of :func:`measures`.

    Returns boundary share, relative perimeter, volume, complement volume
    and the uncovered sphere area, as arrays.

    Quotients ``psi(k, varphi) / sin(varphi)**(k+1)`` go through
    :func:`psi_ratio`, which is exact at ``varphi = 0`` and free of the
    cancellation the naive ratio suffers for small angles.
    """
    th, ph = _check_upsilon(theta, varphi)
    c = constants(n)
    st = np.sin(th)
    r_perim = psi_ratio(n - 2, ph)
    r_vol = psi_ratio(n, ph) * np.sin(ph)
    removed = r_vol * st**n
    share = (n - 1) * c.omega_nm1 * np.asarray(psi(n - 2, th))
    perim = (n - 1) * c.omega_nm1 * r_perim * st ** (n - 1)
    vol = c.omega_nm1 * (np.asarray(psi(n, th)) - removed)
    cvol = c.omega_nm1 * (np.asarray(psi(n, math.pi - th)) + removed)
    rest = (n - 1) * c.omega_nm1 * np.asarray(psi(n - 2, math.pi - th))
    return share, perim, vol, cvol, rest


def measures(p):
    vals = measure_arrays(p.theta, p.varphi, p.n)
    return SetMeasures(*(float(v) for v in vals))


def in_xi(p, sigma):
    """True when the half-moon has volume at most ``sigma`` times the ball's.

    Volumes within a relative ``VOLUME_SLACK`` above the bound count as
    inside, so sets built to have volume exactly ``sigma w_n`` qualify
    despite rounding.
    """
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    return measures(p).volume <= sigma * constants(p.n).omega_n * (1.0 + VOLUME_SLACK)


def cap_angle(beta, n, xtol=1e-15):
    """The angle theta(beta) whose cap holds the fraction ``beta`` of the ball.

    Solves ``psi(n, theta) = beta * psi(n, pi)``.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta!r}")
    target = beta * psi(n, math.pi)
    return brentq(lambda t: psi(n, t) - target, 0.0, math.pi, xtol=xtol, rtol=8.9e-16)


def removed_ball(p):
    """Centre abscissa and radius of the ball removed from the unit ball.

    Only meaningful for ``varphi > 0``; the centre lies on the x1 axis at
    ``-sin(theta - varphi) / sin(varphi)``.
    """
    if p.varphi <= 0:
        raise ValueError("the removed set is a half-space when varphi = 0")
    return (
        -math.sin(p.theta - p.varphi) / math.sin(p.varphi),
        math.sin(p.theta) / math.sin(p.varphi),
    )
