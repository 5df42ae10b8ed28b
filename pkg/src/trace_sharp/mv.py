"""Mean-value normalisation: the sharp constant n w_n / (2 w_{n-1}).

Two independent routes certify the constant.  :func:`kmv_sweep` maximises
the closed-form quotient over a grid of the reduced parameter domain, and
:func:`lemma_suite` checks, on grids, every inequality the reduction to
``F(t, s) <= 0`` rests on.  The substitution ``t = theta - pi/2``,
``s = varphi`` carries one picture into the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import map_chunks
from .quotients import q_mv_array
from .special import constants, phi, psi, psi_ratio

__all__ = [
    "LemmaCheck",
    "LemmaReport",
    "SweepReport",
    "F_upper_limit",
    "F_upper_limit_factored",
    "f_n",
    "k_n",
    "k_tilde",
    "kappa_n",
    "kappa_tilde",
    "kmv_sweep",
    "lambda_grid",
    "lemma_F",
    "lemma_F_array",
    "lemma_suite",
    "m_1",
    "m_2",
    "s_t",
    "simplified_lhs",
]

HALF_PI = 0.5 * math.pi
NEAR_MAX_TOL = 1e-6


@dataclass(frozen=True)
class SweepReport:
    n: int
    grid_resolution: int
    max_value: float
    argmax: tuple
    closed_form: float
    gap: float
    near_max_cells: tuple = ()


def _theta_grid(resolution):
    i = np.arange(resolution)
    theta = HALF_PI + HALF_PI * i / resolution
    frac = np.arange(resolution) / resolution
    return theta, frac


def kmv_sweep(n, resolution=512):
    """Grid maximum of the mean-value quotient over the reduced domain.

    Row ``i`` has ``theta_i = pi/2 + (pi/2) i / R`` and ``varphi_ij =
    theta_i j / R`` for ``i, j = 0..R-1``, so the edge ``varphi = 0`` and the
    half-ball corner are grid points and doubling ``R`` nests the grids.
    """
    if resolution < 16:
        raise ValueError(f"resolution must be >= 16, got {resolution}")
    c = constants(n)
    theta, frac = _theta_grid(resolution)
    rows = np.array_split(np.arange(resolution), max(1, resolution // 64))

    def run(idx):
        th = theta[idx][:, None]
        q = q_mv_array(np.broadcast_to(th, (len(idx), resolution)), th * frac, n)
        return q

    q = np.vstack(map_chunks(run, rows))
    flat = int(np.argmax(q))
    i, j = divmod(flat, resolution)
    best = float(q[i, j])
    near = np.argwhere(q >= best - NEAR_MAX_TOL)
    cells = tuple(
        (float(theta[a]), float(theta[a] * frac[b])) for a, b in near.tolist()
    )
    return SweepReport(
        n=n,
        grid_resolution=resolution,
        max_value=best,
        argmax=(float(theta[i]), float(theta[i] * frac[j])),
        closed_form=c.k_mv,
        gap=c.k_mv - best,
        near_max_cells=cells,
    )


# --- the function F of the reduction and its ingredients -------------------


def _lambda_check(t, s):
    # the edge s = t + pi/2 is admitted: there sin(s) = cos(t) > 0 and F is
    # finite, equal to its limit from inside
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    ok = (t >= 0) & (t < HALF_PI) & (s >= 0) & (s <= t + HALF_PI)
    if not np.all(ok):
        raise ValueError("(t, s) must satisfy 0 <= t < pi/2, 0 <= s <= t + pi/2")
    return t, s


def lemma_F_array(t, s, n):
    """``F(t, s)`` on arrays, continuous at ``s = 0``.

    For ``t < pi/4`` the defining expression is evaluated as written.  Near
    ``t = pi/2`` F vanishes like ``(pi/2 - t)**(n-1)`` while the expression
    is a difference of O(1) terms, so there the identity
    ``(n-1) C_n Phi_{n-2}(pi/2) Phi_n(pi/2) = 1`` is used to cancel the
    constant analytically, leaving ``sin(u)**(n-1)`` times an O(1) bracket
    with ``u = pi/2 - t``.
    """
    t, s = _lambda_check(t, s)
    c = constants(n)
    cn = (n - 1) * c.C_n
    r_lo_s = psi_ratio(n - 2, s)
    r_hi_s = psi_ratio(n, s) * np.sin(s)

    near = t >= 0.25 * math.pi
    tn = np.where(near, 0.0, t)
    ct = np.cos(tn)
    direct = (
        1.0
        - cn * np.asarray(phi(n - 2, tn)) * (np.asarray(phi(n, tn)) - r_hi_s * ct**n)
        - (n - 1) * r_lo_s * ct ** (n - 1)
    )

    u = np.where(near, HALF_PI - t, 0.0)
    su = np.sin(u)
    su_pow = su ** (n - 1)
    r_lo_u = psi_ratio(n - 2, u)
    full_lo = phi(n - 2, HALF_PI)
    full_hi = phi(n, HALF_PI)
    # a = psi(n-2, u) and b = psi(n, u) + psi(n, s) sin(u)**n / sin(s)**n, both
    # divided through by sin(u)**(n-1)
    a = r_lo_u
    b = psi_ratio(n, u) * su * su + r_hi_s * su
    bracket = cn * (full_lo * b + a * full_hi - a * b * su_pow) - (n - 1) * r_lo_s
    corner = su_pow * bracket
    out = np.where(near, corner, direct)
    return out


def lemma_F(t, s, n):
    return float(lemma_F_array(t, s, n))


def F_upper_limit(t, n):
    """Limit of ``F(t, s)`` as ``s`` increases to ``t + pi/2``, as defined."""
    c = constants(n)
    ph2 = phi(n - 2, t)
    return (
        1.0
        - (n - 1) * c.C_n * ph2 * (phi(n, t) - psi(n, t + HALF_PI))
        - (n - 1) * psi(n - 2, t + HALF_PI)
    )


def F_upper_limit_factored(t, n):
    """The same limit in product form ``(1 + 2(n-1) w_{n-1} Phi_{n-2}(t)/(n w_n)) (1 - a_n/2)``."""
    c = constants(n)
    return (1.0 + 2.0 * (n - 1) * phi(n - 2, t) / c.a_n) * (1.0 - 0.5 * c.a_n)


def lambda_grid(n, resolution=1000):
    """F on the grid ``t_i = (pi/2) i / R``, ``s_ij = (t_i + pi/2) j / R``.

    Returns ``(t, s, values)`` with ``t`` of shape (R,) and the other two of
    shape (R, R); index (0, 0) is the corner where F vanishes.
    """
    t = HALF_PI * np.arange(resolution) / resolution
    frac = np.arange(resolution) / resolution
    s = (t[:, None] + HALF_PI) * frac[None, :]
    rows = np.array_split(np.arange(resolution), max(1, resolution // 50))

    def run(idx):
        tt = np.broadcast_to(t[idx][:, None], (len(idx), resolution))
        return lemma_F_array(tt, s[idx], n)

    return t, s, np.vstack(map_chunks(run, rows))


def f_n(t, n):
    """``C_n Phi_{n-2}(t) cos t``: where ``sin s`` must sit for dF/ds = 0."""
    return constants(n).C_n * np.asarray(phi(n - 2, t)) * np.cos(t)


def s_t(t, n):
    return np.arcsin(f_n(t, n))


def k_n(t, n):
    """``(n-1)/n C_n Phi_{n-2}(t)**2 - (1 - cos(t)**(n-1)) / (n-1)``.

    Vanishes at both ends of (0, pi/2); the flat end at pi/2 is evaluated in
    the variable ``u = pi/2 - t`` with the constant term cancelled
    analytically (see :func:`lemma_F_array`).
    """
    c = constants(n)
    t = np.asarray(t, dtype=float)
    near = t >= 0.25 * math.pi
    tn = np.where(near, 0.0, t)
    one_minus = -np.expm1((n - 1) * np.log(np.cos(tn)))
    direct = (n - 1) / n * c.C_n * np.asarray(phi(n - 2, tn)) ** 2 - one_minus / (n - 1)

    u = np.where(near, HALF_PI - t, 0.0)
    su_pow = np.sin(u) ** (n - 1)
    r = psi_ratio(n - 2, u)
    corner = su_pow * (
        1.0 / (n - 1) - 4.0 / c.a_n * r + (n - 1) / n * c.C_n * r * r * su_pow
    )
    return np.where(near, corner, direct)


def kappa_n(t, n):
    c = constants(n)
    return np.sin(t) / n - c.C_n / (n + 2) * np.asarray(phi(n - 2, t)) * np.cos(t) ** 2


def simplified_lhs(t, n):
    """``k_n + C_n Phi_{n-2}(t) cos(t)**(n-1) kappa_n``, positive on (0, pi/2)."""
    c = constants(n)
    return k_n(t, n) + c.C_n * np.asarray(phi(n - 2, t)) * np.cos(t) ** (n - 1) * kappa_n(
        t, n
    )


def k_tilde(t):
    t = np.asarray(t, dtype=float)
    pi2 = math.pi**2
    return 4.0 / pi2**2 * t * t * (pi2 + 4.0 * np.cos(t)) - 2.0 * np.sin(0.5 * t) ** 2


def kappa_tilde(t):
    t = np.asarray(t, dtype=float)
    return 0.5 * np.sin(t) - 2.0 / math.pi**2 * t * (1.0 + np.cos(t) ** 2)


def m_1(t):
    t = np.asarray(t, dtype=float)
    one_minus = 2.0 * np.sin(0.5 * t) ** 2
    return t - 0.5 * math.pi**2 * np.sqrt(one_minus / (math.pi**2 + 4.0 * np.cos(t)))


def m_2(t):
    t = np.asarray(t, dtype=float)
    return np.sin(t) / (1.0 + np.cos(t) ** 2) - 4.0 / math.pi**2 * t


# --- grid certification -----------------------------------------------------


@dataclass(frozen=True)
class LemmaCheck:
    """One verified inequality.

    ``worst_violation`` is signed: for a claim ``g > 0`` it is ``-min g`` over
    the grid, for ``|g| <= tol`` it is ``max |g|``.  The check passes when it
    is below ``tolerance`` (strictly, for the sign claims, which use 0).
    """

    name: str
    worst_violation: float
    location: tuple
    tolerance: float = 0.0

    @property
    def passed(self):
        return self.worst_violation < self.tolerance or (
            self.tolerance > 0 and self.worst_violation <= self.tolerance
        )


@dataclass(frozen=True)
class LemmaReport:
    n: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def violations(self):
        return [c for c in self.checks if not c.passed]


def _positive(name, t, values):
    values = np.asarray(values, dtype=float)
    i = int(np.argmin(values))
    return LemmaCheck(name, float(-values[i]), (float(t[i]),))


def lemma_suite(n, resolution=1000):
    """Grid checks of every inequality the ``F <= 0`` argument uses.

    The t-grid is ``(pi/2) i / (R + 1)``, ``i = 1..R`` (open interval); the
    Lambda grid is the one of :func:`lambda_grid` at the same resolution.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    t = HALF_PI * np.arange(1, resolution + 1) / (resolution + 1)
    checks = []

    fn = f_n(t, n)
    checks.append(_positive("f_n > 0", t, fn))
    checks.append(_positive("f_n < 1", t, 1.0 - fn))
    checks.append(_positive("F(t, s_t) < 0", t, -lemma_F_array(t, s_t(t, n), n)))
    checks.append(_positive("lim F(t, s -> t + pi/2) < 0", t, -F_upper_limit(t, n)))

    tt, ss, vals = lambda_grid(n, resolution)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    checks.append(
        LemmaCheck(
            "F <= 0 on Lambda grid",
            float(vals[i, j]),
            (float(tt[i]), float(ss[i, j])),
            tolerance=1e-12,
        )
    )
    off = vals.copy()
    off[:2, :2] = -np.inf
    i, j = np.unravel_index(int(np.argmax(off)), off.shape)
    checks.append(
        LemmaCheck(
            "F < 0 off the (0,0) cell",
            float(off[i, j]),
            (float(tt[i]), float(ss[i, j])),
        )
    )

    if n >= 4:
        checks.append(_positive("k_n > 0", t, k_n(t, n)))
    if n == 3:
        k3 = np.abs(k_n(t, 3))
        i = int(np.argmax(k3))
        checks.append(LemmaCheck("k_3 == 0", float(k3[i]), (float(t[i]),), 1e-12))
    checks.append(_positive("kappa_n > 0", t, kappa_n(t, n)))
    checks.append(_positive("k_n + C_n Phi cos^(n-1) kappa_n > 0", t, simplified_lhs(t, n)))
    if n == 2:
        checks.append(_positive("k_tilde > 0", t, k_tilde(t)))
        checks.append(_positive("kappa_tilde > 0", t, kappa_tilde(t)))
        checks.append(_positive("m_1 > 0", t, m_1(t)))
        checks.append(_positive("m_2 > 0", t, m_2(t)))
    return LemmaReport(n=n, checks=checks)
