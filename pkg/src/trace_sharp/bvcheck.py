"""Function-level checks of the trace inequalities, and a set-sampling oracle.

Test functions are piecewise constant with nested superlevel sets (caps of
the ball, or a single half-moon).  For these, total variation, boundary
trace, mean value and sigma-median are all closed form, so the two sides of
each trace inequality are evaluated without discretisation error.

The oracle samples subsets of the unit disk (half-moons, caps and convex
polygons clipped to the disk) and checks that no sampled isoperimetric
quotient exceeds the certified constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ._parallel import map_chunks
from .geometry import VOLUME_SLACK, HalfMoonParams, SetMeasures, measure_arrays, measures
from .quotients import q_med, q_mv
from .special import constants

__all__ = [
    "CandidateSet2D",
    "HalfMoonIndicator",
    "LayerCakeFunction",
    "OracleReport",
    "OracleRow",
    "half_plane_measures",
    "med_sigma_value",
    "mv_value",
    "oracle_sample",
    "SuiteCheck",
    "polygon_disk_measures",
    "random_layer_cake",
    "total_variation",
    "trace_gap_med",
    "trace_gap_mv",
    "trace_norm",
    "verify_suite",
    "zero_set_volume",
]

GL_NODES = 32


class _Layers(NamedTuple):
    """Nested superlevel sets, innermost first, with their measures."""

    n: int
    offset: float
    jumps: np.ndarray
    shares: np.ndarray
    perims: np.ndarray
    vols: np.ndarray
    cvols: np.ndarray
    rests: np.ndarray


@dataclass(frozen=True)
class LayerCakeFunction:
    """``u = offset + sum_i jumps[i] * chi(C_i)`` with caps ``C_i = {x1 > cos(theta_i)}``.

    Increasing cap angles give nested caps, so every superlevel set of u
    is one of them.
    """

    n: int
    cap_angles: tuple
    jumps: tuple
    offset: float = 0.0

    def __post_init__(self):
        th = tuple(float(t) for t in self.cap_angles)
        a = tuple(float(x) for x in self.jumps)
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if len(th) != len(a):
            raise ValueError("cap_angles and jumps must have the same length")
        if any(not 0.0 < t < math.pi for t in th):
            raise ValueError("cap angles must lie in (0, pi)")
        if any(t1 >= t2 for t1, t2 in zip(th, th[1:])):
            raise ValueError("cap angles must be strictly increasing")
        if any(not x > 0 for x in a):
            raise ValueError("jumps must be strictly positive")
        object.__setattr__(self, "cap_angles", th)
        object.__setattr__(self, "jumps", a)
        object.__setattr__(self, "offset", float(self.offset))

    def layers(self):
        return self._layers

    @cached_property
    def _layers(self):
        th = np.asarray(self.cap_angles)
        share, perim, vol, cvol, rest = measure_arrays(th, np.zeros_like(th), self.n)
        return _Layers(self.n, self.offset, np.asarray(self.jumps), share, perim, vol, cvol, rest)

    def affine(self, a, b):
        """The function ``a * u + b`` for ``a > 0``."""
        if not a > 0:
            raise ValueError("scale must be positive")
        return LayerCakeFunction(
            self.n, self.cap_angles, tuple(a * x for x in self.jumps), a * self.offset + b
        )


@dataclass(frozen=True)
class HalfMoonIndicator:
    """``u = offset + amplitude * chi(E(theta, varphi))``."""

    params: HalfMoonParams
    amplitude: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError("amplitude must be positive")

    @property
    def n(self):
        return self.params.n

    def layers(self):
        return self._layers

    @cached_property
    def _layers(self):
        m = measures(self.params)
        one = lambda v: np.array([v])  # noqa: E731
        return _Layers(
            self.n,
            float(self.offset),
            one(float(self.amplitude)),
            one(m.boundary_share),
            one(m.relative_perimeter),
            one(m.volume),
            one(m.complement_volume),
            one(m.rest(self.n)),
        )


def _levels(lay):
    """Values of u from the innermost set outwards; the last one is the offset."""
    tail = np.concatenate([np.cumsum(lay.jumps[::-1])[::-1], [0.0]])
    return lay.offset + tail


def _bands(lay):
    """Boundary measure carrying each level value of :func:`_levels`."""
    return np.concatenate([lay.shares[:1], np.diff(lay.shares), lay.rests[-1:]])


def _regions(lay):
    """Volume of each region on which u takes the matching level value."""
    return np.concatenate([lay.vols[:1], np.diff(lay.vols), lay.cvols[-1:]])


def total_variation(u):
    """``|Du|(B^n)``; by the coarea formula, jumps times perimeters."""
    lay = u.layers()
    return float(np.sum(lay.jumps * lay.perims))


def mv_value(u):
    """Mean value of u over the ball."""
    lay = u.layers()
    return float(lay.offset + np.sum(lay.jumps * lay.vols) / constants(lay.n).omega_n)


def _l1_distance(lay, c):
    return float(np.sum(np.abs(_levels(lay) - c) * _bands(lay)))


def trace_gap_mv(u):
    """``||trace(u) - mv(u)||_{L^1(sphere)}``."""
    return _l1_distance(u.layers(), mv_value(u))


def med_sigma_value(u, sigma):
    """``inf{t : |{u > t}| <= sigma |B|}``.

    ``{u > t}`` is the k-th nested set when t lies between the (k+1)-th and
    k-th level, so the infimum is the level just below the largest set that
    still fits.
    """
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    lay = u.layers()
    cap = sigma * constants(lay.n).omega_n * (1.0 + VOLUME_SLACK)
    k = int(np.count_nonzero(lay.vols <= cap))
    return float(_levels(lay)[k])


def trace_gap_med(u, sigma):
    """``||trace(u) - med_sigma(u)||_{L^1(sphere)}``."""
    return _l1_distance(u.layers(), med_sigma_value(u, sigma))


def trace_norm(u):
    """``||trace(u)||_{L^1(sphere)}``."""
    return _l1_distance(u.layers(), 0.0)


def zero_set_volume(u):
    """Volume of ``{u = 0}``."""
    lay = u.layers()
    return float(np.sum(_regions(lay)[_levels(lay) == 0.0]))


def random_layer_cake(rng, n, max_layers=6, negative_offsets=True):
    """A random LayerCakeFunction with 1..max_layers caps."""
    m = int(rng.integers(1, max_layers + 1))
    while True:
        th = np.sort(rng.uniform(0.0, math.pi, m))
        if th[0] > 0 and np.all(np.diff(th) > 0):
            break
    jumps = rng.uniform(0.05, 2.0, m)
    offset = rng.normal(0.0, 1.0) if negative_offsets else rng.uniform(0.0, 1.0)
    return LayerCakeFunction(n, tuple(th), tuple(jumps), offset)


# -- sets in the disk ---------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_NODES)


def _arc_integrals(start, delta):
    """Length and ``(1/2) int (x dy - y dx)`` of the unit-circle arc ``[start, start + delta]``."""
    t = start + 0.5 * delta * (_GL_X + 1.0)
    x, y = np.cos(t), np.sin(t)
    dx, dy = -np.sin(t), np.cos(t)
    h = 0.5 * delta
    length = h * np.sum(_GL_W * np.hypot(dx, dy))
    area = 0.5 * h * np.sum(_GL_W * (x * dy - y * dx))
    return float(length), float(area)


def _inside_convex(vertices, pt):
    p = vertices
    q = np.roll(vertices, -1, axis=0)
    cross = (q[:, 0] - p[:, 0]) * (pt[1] - p[:, 1]) - (q[:, 1] - p[:, 1]) * (pt[0] - p[:, 0])
    return bool(np.all(cross > 0))


def polygon_disk_measures(vertices):
    """Measures of ``P & D`` for a convex polygon P (counterclockwise) and the unit disk D.

    The boundary of the intersection is traced counterclockwise: polygon
    edges clipped to the disk, plus circle arcs lying inside P.  Area
    follows from Green's theorem; arcs are integrated by Gauss-Legendre.
    """
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise ValueError("need at least three 2-D vertices")
    area = 0.0
    perim = 0.0
    crossings = []
    for p, q in zip(v, np.roll(v, -1, axis=0)):
        d = q - p
        a = d @ d
        b = 2.0 * (p @ d)
        c = p @ p - 1.0
        disc = b * b - 4.0 * a * c
        if a == 0.0 or disc <= 0.0:
            continue
        sq = math.sqrt(disc)
        # stable pair of roots
        r = -0.5 * (b + math.copysign(sq, b))
        t0, t1 = sorted((r / a, c / r)) if r != 0.0 else (-sq / (2 * a), sq / (2 * a))
        lo, hi = max(t0, 0.0), min(t1, 1.0)
        if lo >= hi:
            continue
        s, e = p + lo * d, p + hi * d
        perim += math.hypot(*(e - s))
        area += 0.5 * (s[0] * e[1] - e[0] * s[1])
        for t in (t0, t1):
            if 0.0 < t < 1.0:
                pt = p + t * d
                crossings.append(math.atan2(pt[1], pt[0]) % (2 * math.pi))
    share = 0.0
    if crossings:
        ang = np.sort(np.asarray(crossings))
        nxt = np.roll(ang, -1)
        nxt[-1] += 2 * math.pi
        for a0, a1 in zip(ang, nxt):
            delta = a1 - a0
            if delta <= 0.0:
                continue
            mid = a0 + 0.5 * delta
            if _inside_convex(v, (math.cos(mid), math.sin(mid))):
                length, arc_area = _arc_integrals(a0, delta)
                share += length
                area += arc_area
    elif _inside_convex(v, (1.0, 0.0)):
        # disk inside the polygon
        length, arc_area = _arc_integrals(0.0, 2 * math.pi)
        share, area = length, arc_area
    c = constants(2)
    return SetMeasures(
        boundary_share=float(share),
        relative_perimeter=float(perim),
        volume=float(area),
        complement_volume=float(c.omega_n - area),
        boundary_rest=float(c.sphere_area - share),
    )


def half_plane_measures(theta, reach=4.0):
    """Clip of the half-plane ``{x1 > cos(theta)}`` (as a large polygon) to the disk."""
    h = math.cos(theta)
    square = [(h, -reach), (reach, -reach), (reach, reach), (h, reach)]
    return polygon_disk_measures(square)


KINDS = ("half-moon", "cap", "polygon-clip")


@dataclass(frozen=True)
class CandidateSet2D:
    kind: str
    params: tuple
    measures: SetMeasures
    injected: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown candidate kind {self.kind!r}")

    def params_text(self):
        if self.kind == "polygon-clip":
            body = " ".join(f"{x:.17g},{y:.17g}" for x, y in self.params)
        elif self.kind == "cap":
            body = f"theta={self.params[0]:.17g}"
        else:
            body = f"theta={self.params[0]:.17g};varphi={self.params[1]:.17g}"
        return body + (";injected" if self.injected else "")


@dataclass(frozen=True)
class OracleRow:
    kind: str
    params: str
    volume: float
    boundary_share: float
    relative_perimeter: float
    quotient_mv: float
    quotient_med: float | None
    margin: float


@dataclass(frozen=True)
class OracleReport:
    seed: int
    count: int
    sigma: float | None
    k_mv: float
    k_med: float | None
    max_q_mv: float
    max_q_med: float | None
    skipped: int
    injected_q_mv: float
    injected_q_med: float | None
    rows: tuple = field(repr=False, default=())

    @property
    def margin_mv(self):
        return self.k_mv - self.max_q_mv

    @property
    def margin_med(self):
        if self.k_med is None or self.max_q_med is None:
            return None
        return self.k_med - self.max_q_med

    def violations(self, tol=1e-6):
        bad = [r for r in self.rows if r.quotient_mv > self.k_mv + tol]
        if self.k_med is not None:
            bad += [
                r for r in self.rows
                if r.quotient_med is not None and r.quotient_med > self.k_med + tol
            ]
        return bad


def _sample_one(seed_seq):
    rng = np.random.default_rng(seed_seq)
    kind = KINDS[int(rng.integers(0, 3))]
    if kind == "half-moon":
        th = rng.uniform(0.5 * math.pi, math.pi)
        ph = rng.uniform(0.0, th)
        p = HalfMoonParams(th, ph, 2)
        return CandidateSet2D(kind, (th, ph), measures(p))
    if kind == "cap":
        th = rng.uniform(0.0, math.pi)
        if th == 0.0:
            return None
        return CandidateSet2D(kind, (th,), measures(HalfMoonParams(th, 0.0, 2)))
    pts = rng.uniform(-1.0, 1.0, size=(int(rng.integers(3, 11)), 2))
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return None
    verts = pts[hull.vertices]
    return CandidateSet2D(kind, tuple(map(tuple, verts)), polygon_disk_measures(verts))


def _row(cand, k_mv, k_med, sigma):
    m = cand.measures
    if not m.relative_perimeter > 0:
        return None
    qmv = q_mv(m, 2).value
    qmed = None
    margin = k_mv - qmv
    if sigma is not None and m.volume <= sigma * math.pi * (1.0 + VOLUME_SLACK):
        qmed = q_med(m).value
        margin = min(margin, k_med - qmed)
    return OracleRow(
        cand.kind,
        cand.params_text(),
        m.volume,
        m.boundary_share,
        m.relative_perimeter,
        qmv,
        qmed,
        margin,
    )


def oracle_sample(seed, count, sigma=None):
    """Sample ``count`` candidate sets in the disk and compare their quotients with the constants.

    Each sample draws from its own child of ``SeedSequence(seed)``, so the
    result does not depend on the thread count.  The extremal sets (the
    half-ball, and the solved half-moon when ``sigma`` is given) are
    appended as injected rows after the samples.
    """
    from .med import solve

    if count < 1:
        raise ValueError("count must be >= 1")
    if sigma is not None and not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    k_mv = constants(2).k_mv
    sol = solve(sigma, 2) if sigma is not None else None
    k_med = sol.k_med if sol is not None else None

    children = np.random.SeedSequence(seed).spawn(count)
    chunks = [children[i:i + 256] for i in range(0, count, 256)]

    def work(chunk):
        out = []
        for s in chunk:
            cand = _sample_one(s)
            out.append(None if cand is None else _row(cand, k_mv, k_med, sigma))
        return out

    rows = [r for part in map_chunks(work, chunks) for r in part]
    skipped = sum(r is None for r in rows)
    rows = [r for r in rows if r is not None]

    half_ball = CandidateSet2D(
        "half-moon", (0.5 * math.pi, 0.0), measures(HalfMoonParams(0.5 * math.pi, 0.0, 2)), True
    )
    injected = [_row(half_ball, k_mv, k_med, sigma)]
    if sol is not None:
        moon = CandidateSet2D(
            "half-moon",
            (sol.theta_sigma, sol.varphi_sigma),
            measures(HalfMoonParams(sol.theta_sigma, sol.varphi_sigma, 2)),
            True,
        )
        injected.append(_row(moon, k_mv, k_med, sigma))
    rows += injected

    med_vals = [r.quotient_med for r in rows if r.quotient_med is not None]
    return OracleReport(
        seed=seed,
        count=count,
        sigma=sigma,
        k_mv=k_mv,
        k_med=k_med,
        max_q_mv=max(r.quotient_mv for r in rows),
        max_q_med=max(med_vals) if med_vals else None,
        skipped=skipped,
        injected_q_mv=injected[0].quotient_mv,
        injected_q_med=injected[1].quotient_med if sol is not None else None,
        rows=tuple(rows),
    )


# -- function-level suite ----------------------------------------------------

INEQUALITY_SLACK = 1e-9


@dataclass(frozen=True)
class SuiteCheck:
    """One function-level check.

    ``worst_ratio`` is the largest ``gap / (constant * TV)`` seen; an
    inequality passes when it stays below ``1 + tolerance``, an equality
    check when it is within ``tolerance`` of 1.
    """

    name: str
    samples: int
    worst_ratio: float
    tolerance: float
    equality: bool = False

    @property
    def passed(self):
        if self.equality:
            return abs(self.worst_ratio - 1.0) <= self.tolerance
        return self.worst_ratio <= 1.0 + self.tolerance


def verify_suite(n, count=1000, seed=0, sigmas=(0.3, 0.5, 0.7)):
    """Trace inequalities on seeded random layer-cake functions, plus the equality cases.

    The median checks use the constant ``K_med(max(sigma, 1 - sigma))``;
    the median equality case is the solved half-moon at
    ``rho = max(sigma, 1 - sigma)`` used with the rho-median.
    """
    from .med import solve

    if count < 1:
        raise ValueError("count must be >= 1")
    k_mv = constants(n).k_mv
    rng = np.random.default_rng(seed)
    funcs = [random_layer_cake(rng, n) for _ in range(count)]
    checks = [
        SuiteCheck(
            "mv-inequality",
            count,
            max(trace_gap_mv(u) / (k_mv * total_variation(u)) for u in funcs),
            INEQUALITY_SLACK,
        )
    ]
    half_ball = LayerCakeFunction(n, (0.5 * math.pi,), (1.0,), 0.0)
    checks.append(
        SuiteCheck(
            "mv-equality-half-ball",
            1,
            trace_gap_mv(half_ball) / (k_mv * total_variation(half_ball)),
            1e-12,
            equality=True,
        )
    )
    for sigma in sigmas:
        rho = max(sigma, 1.0 - sigma)
        sol = solve(rho, n)
        worst = max(trace_gap_med(u, sigma) / (sol.k_med * total_variation(u)) for u in funcs)
        checks.append(SuiteCheck(f"med-inequality-sigma={sigma:g}", count, worst, INEQUALITY_SLACK))
        moon = HalfMoonIndicator(HalfMoonParams(sol.theta_sigma, sol.varphi_sigma, n))
        checks.append(
            SuiteCheck(
                f"med-equality-rho={rho:g}",
                1,
                trace_gap_med(moon, rho) / (sol.k_med * total_variation(moon)),
                1e-10,
                equality=True,
            )
        )
    return checks
