"""Median normalisation: the extremal half-moon and ``K_med(B^n, sigma)``.

Among half-moons of volume ``sigma * w_n`` the angle ``theta`` is a function
``f(varphi)`` of ``varphi`` (the volume constraint).  The median quotient
along that curve, ``G(f(varphi), varphi)``, has a single critical point,
characterised by ``G = 1 / cos(f(varphi) - varphi)``; :func:`solve` finds it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._parallel import map_chunks
from .geometry import cap_angle
from .quotients import g_med_array
from .special import psi, psi_ratio

__all__ = [
    "MedSolution",
    "NoRootError",
    "SingularityError",
    "cap_value",
    "curve_values",
    "eta",
    "f_of_varphi",
    "f_prime_closed_form",
    "g_aux",
    "kmed_sweep",
    "root_function",
    "singular_point",
    "solve",
    "system_residuals",
    "xi",
]

THETA_CAP_EPS = 1e-9
SINGULAR_TOL = 1e-10
SCAN_POINTS = 512
MIN_EDGE = 1e-6


class SingularityError(ArithmeticError):
    """Raised where an expression of the median problem has a pole."""


class NoRootError(RuntimeError):
    """No sign change of the root function was found."""


def _check_sigma(sigma):
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")


def eta(varphi, n):
    """``psi(n, varphi) / sin(varphi)**n`` on ``[0, pi)``; zero at the origin."""
    ph = np.asarray(varphi, dtype=float)
    if np.any(ph < 0) or np.any(ph >= math.pi):
        raise ValueError("varphi must lie in [0, pi)")
    out = psi_ratio(n, ph) * np.sin(ph)
    return float(out) if np.ndim(varphi) == 0 else out


def xi(theta, sigma, n):
    """``(psi(n, theta) - sigma psi(n, pi)) / sin(theta)**n``."""
    th = np.asarray(theta, dtype=float)
    out = (np.asarray(psi(n, th)) - sigma * psi(n, math.pi)) / np.sin(th) ** n
    return float(out) if np.ndim(theta) == 0 else out


def f_of_varphi(varphi, sigma, n, theta_sigma=None):
    """The angle theta with ``|E(theta, varphi)| = sigma w_n``.

    Inverts ``xi`` by bisection on ``[theta(sigma), pi - eps]`` (elementwise
    on arrays) down to adjacent floats.
    """
    _check_sigma(sigma)
    if theta_sigma is None:
        theta_sigma = cap_angle(sigma, n)
    if np.ndim(varphi) == 0:
        return _f_scalar(float(varphi), sigma, n, theta_sigma)
    ph = np.atleast_1d(np.asarray(varphi, dtype=float))
    target = eta(ph, n)
    lo = np.full_like(ph, theta_sigma)
    gap = np.full_like(ph, THETA_CAP_EPS)
    hi = math.pi - gap
    # very close to pi the root can sit inside the default margin
    while True:
        short = xi(hi, sigma, n) < target
        if not np.any(short):
            break
        gap = np.where(short, gap * 1e-3, gap)
        if np.any(gap < 1e-300):
            raise NoRootError("cannot bracket f(varphi) below pi")
        hi = math.pi - gap
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        done = (mid <= lo) | (mid >= hi)
        if np.all(done):
            break
        above = xi(mid, sigma, n) >= target
        hi = np.where(above & ~done, mid, hi)
        lo = np.where(~above & ~done, mid, lo)
    res_lo = np.abs(xi(lo, sigma, n) - target)
    res_hi = np.abs(xi(hi, sigma, n) - target)
    out = np.where(res_lo <= res_hi, lo, hi)
    out = np.where(ph == 0.0, theta_sigma, out)
    return float(out[0]) if np.ndim(varphi) == 0 else out


def _f_scalar(varphi, sigma, n, theta_sigma):
    if varphi == 0.0:
        return theta_sigma
    target = eta(varphi, n)
    gap = THETA_CAP_EPS
    while xi(math.pi - gap, sigma, n) < target:
        gap *= 1e-3
        if gap < 1e-300:
            raise NoRootError("cannot bracket f(varphi) below pi")
    return brentq(
        lambda t: xi(t, sigma, n) - target,
        theta_sigma,
        math.pi - gap,
        xtol=1e-16,
        rtol=8.9e-16,
    )


def curve_values(varphi, sigma, n, theta_sigma=None):
    """``G(f(varphi), varphi)``: the median quotient along the volume constraint."""
    th = f_of_varphi(varphi, sigma, n, theta_sigma)
    out = g_med_array(th, varphi, n)
    return float(out) if np.ndim(varphi) == 0 else out


def cap_value(sigma, n):
    """Median quotient of the cap holding ``sigma`` of the ball (``varphi = 0``)."""
    return float(g_med_array(cap_angle(sigma, n), 0.0, n))


def f_prime_closed_form(varphi, sigma, n, theta_sigma=None):
    """Derivative of ``f`` from implicit differentiation of the volume constraint."""
    th = f_of_varphi(varphi, sigma, n, theta_sigma)
    ph = varphi
    st, ct = math.sin(th), math.cos(th)
    top = n * st ** (n + 1) * psi(n, ph)
    bottom = math.sin(ph) ** n * (
        st ** (n + 1) - n * ct * (psi(n, th) - sigma * psi(n, math.pi))
    )
    return 1.0 + top / bottom * (ct / st - math.cos(ph) / math.sin(ph))


def g_aux(theta, sigma, n):
    """``sigma (n-1) psi(n-2, pi) / ((n-1) cos(theta) psi(n-2, theta) - sin(theta)**(n-1))``.

    The denominator is written as ``sin(theta)**(n-1) * ((n-1) cos(theta)
    R - 1)`` with ``R = psi(n-2, theta) / sin(theta)**(n-1)``, which keeps
    its sign reliable for small theta.  The pole test is applied to the
    bracket, the only factor that can vanish inside (0, pi).
    """
    th = np.asarray(theta, dtype=float)
    if np.any(th <= 0) or np.any(th >= math.pi):
        raise ValueError("theta must lie in (0, pi)")
    bracket = (n - 1) * np.cos(th) * psi_ratio(n - 2, th) - 1.0
    denom = np.sin(th) ** (n - 1) * bracket
    if np.any(np.abs(bracket) < 1e-14):
        raise SingularityError(f"denominator of g vanishes at theta={theta!r}")
    out = sigma * (n - 1) * psi(n - 2, math.pi) / denom
    return float(out) if np.ndim(theta) == 0 else out


def root_function(varphi, sigma, n, theta_sigma=None, check=True):
    """``G(f(varphi), varphi) - 1 / cos(f(varphi) - varphi)``; zero at the extremal."""
    th = f_of_varphi(varphi, sigma, n, theta_sigma)
    gap = np.asarray(th) - np.asarray(varphi)
    if check and np.any(np.abs(gap - 0.5 * math.pi) <= SINGULAR_TOL):
        raise SingularityError("f(varphi) - varphi = pi/2 is a pole of the root function")
    out = g_med_array(th, varphi, n) - 1.0 / np.cos(gap)
    return float(out) if np.ndim(varphi) == 0 else out


def singular_point(sigma, n, theta_sigma=None):
    """The varphi where ``f(varphi) - varphi = pi/2`` (exists only for sigma > 1/2)."""
    if sigma <= 0.5:
        return None
    if theta_sigma is None:
        theta_sigma = cap_angle(sigma, n)

    def gap(p):
        return f_of_varphi(p, sigma, n, theta_sigma) - p - 0.5 * math.pi

    return brentq(gap, 0.0, math.pi - MIN_EDGE, xtol=1e-15, rtol=8.9e-16)


def system_residuals(theta, varphi, sigma, n):
    """Residuals of the two stationarity equations at ``(theta, varphi)``."""
    g = g_aux(theta, sigma, n)
    ct, st = math.cos(theta), math.sin(theta)
    lhs1 = psi(n - 2, varphi) / psi(n - 2, theta) * (st / math.sin(varphi)) ** n
    r1 = lhs1 - (1.0 - g * ct)
    r2 = math.cos(varphi) / math.sin(varphi) - (ct / st - g / st)
    return r1, r2


@dataclass(frozen=True)
class MedSolution:
    sigma: float
    rho: float
    theta_sigma: float
    varphi_sigma: float
    k_med: float
    residual_sys: float
    residual_nec: float
    n: int = 2


def _scan(lo, hi, sigma, n, theta_sigma):
    """Brackets of sign changes of the root function on ``(lo, hi)``."""
    pts = lo + (hi - lo) * np.arange(1, SCAN_POINTS + 1) / (SCAN_POINTS + 1)
    # geometric refinement toward both ends, down to MIN_EDGE
    edge = np.geomspace(MIN_EDGE, (hi - lo) / (SCAN_POINTS + 1), 24)
    pts = np.unique(np.concatenate([lo + edge, pts, hi - edge]))
    vals = root_function(pts, sigma, n, theta_sigma, check=False)
    brackets = []
    for a, b, fa, fb in zip(pts[:-1], pts[1:], vals[:-1], vals[1:]):
        if np.isfinite(fa) and np.isfinite(fb) and fa * fb <= 0:
            brackets.append((a, b, fa, fb))
    return brackets


def solve(sigma, n=2):
    """Extremal half-moon for the median quotient at volume fraction ``sigma``."""
    _check_sigma(sigma)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    theta_sigma = cap_angle(sigma, n)
    if sigma > 0.5:
        ps = singular_point(sigma, n, theta_sigma)
        pieces = [(0.0, ps - SINGULAR_TOL), (ps + SINGULAR_TOL, math.pi)]
    else:
        pieces = [(0.0, math.pi)]

    candidates = []
    for lo, hi in pieces:
        for a, b, fa, fb in _scan(lo, hi, sigma, n, theta_sigma):
            # a pole also flips the sign; a real zero has F rising through 0
            if not fa < fb:
                continue
            if fa == 0.0:
                root = a
            elif fb == 0.0:
                root = b
            else:
                root = brentq(
                    lambda p: root_function(p, sigma, n, theta_sigma, check=False),
                    a,
                    b,
                    xtol=1e-15,
                    rtol=8.9e-16,
                )
            candidates.append(root)
    if not candidates:
        raise NoRootError(f"no sign change of the root function for sigma={sigma}, n={n}")
    values = [curve_values(p, sigma, n, theta_sigma) for p in candidates]
    best = int(np.argmax(values))
    ph = float(candidates[best])
    th = f_of_varphi(ph, sigma, n, theta_sigma)
    k = float(values[best])
    r1, r2 = system_residuals(th, ph, sigma, n)
    return MedSolution(
        sigma=sigma,
        rho=max(sigma, 1.0 - sigma),
        theta_sigma=th,
        varphi_sigma=ph,
        k_med=k,
        residual_sys=max(abs(r1), abs(r2)),
        residual_nec=abs(k - 1.0 / math.cos(th - ph)),
        n=n,
    )


def kmed_sweep(sigma, n=2, resolution=4096):
    """Brute-force maximum of ``G(f(varphi), varphi)`` on ``varphi = pi j / R``."""
    _check_sigma(sigma)
    theta_sigma = cap_angle(sigma, n)
    grid = math.pi * np.arange(resolution) / resolution
    chunks = np.array_split(grid, max(1, resolution // 256))
    vals = map_chunks(lambda c: curve_values(c, sigma, n, theta_sigma), chunks)
    return float(np.max(np.concatenate(vals)))


def k_med(sigma, n=2):
    """``K_med(B^n, sigma)``, the maximal median quotient at volume fraction sigma."""
    return solve(sigma, n).k_med


def c_med(sigma, n=2):
    """Sharp constant of the median trace inequality: ``K_med(B^n, max(sigma, 1 - sigma))``."""
    _check_sigma(sigma)
    return k_med(max(sigma, 1.0 - sigma), n)
