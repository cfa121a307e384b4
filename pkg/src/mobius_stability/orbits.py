"""Orbit iteration, recurrence search and equidistribution diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .geometry import circle_parameter
from .mobius import POLE_TOL, NormalizedMobius, _require_elliptic
from .sphere import INF, PointLike, SpherePoint, as_point, chordal_distance

__all__ = [
    "Termination",
    "Orbit",
    "RecurrenceRecord",
    "Period",
    "Aperiodic",
    "SearchExhaustedError",
    "InvalidTargetError",
    "iterate_orbit",
    "find_recurrence",
    "density_witness",
    "star_discrepancy",
    "star_discrepancy_of",
    "rotation_points",
    "detect_periodic_orbit",
    "FAR_FIELD",
]

PERIOD_TOL = 1e-12
# beyond this modulus distances switch to the chordal metric
FAR_FIELD = 1e6


class SearchExhaustedError(RuntimeError):
    """No hit within the step budget. Inconclusive, not a counterexample."""

    def __init__(self, message: str, closest_n: int | None, closest_distance: float):
        super().__init__(f"{message} (closest approach {closest_distance:.3e} at n = {closest_n})")
        self.closest_n = closest_n
        self.closest_distance = closest_distance


class InvalidTargetError(ValueError):
    pass


class Termination(str, Enum):
    LENGTH_REACHED = "length-reached"
    POLE_HIT = "pole-hit"
    PERIOD_DETECTED = "period-detected"


@dataclass(frozen=True)
class Orbit:
    z0: SpherePoint
    points: tuple[SpherePoint, ...]
    termination: Termination
    pole_step: int | None = None
    period: int | None = None

    def __len__(self):
        return len(self.points)

    def __getitem__(self, n) -> SpherePoint:
        return self.points[n]


@dataclass(frozen=True)
class RecurrenceRecord:
    base: complex
    radius: float
    times: tuple[int, ...]
    distances: tuple[float, ...]

    @property
    def first(self) -> int:
        return self.times[0]


@dataclass(frozen=True)
class Period:
    q: int


@dataclass(frozen=True)
class Aperiodic:
    pass


def iterate_orbit(
    m: NormalizedMobius,
    z0: PointLike,
    n_max: int,
    pole_tol: float = POLE_TOL,
    period_tol: float = PERIOD_TOL,
    stop_on_period: bool = False,
) -> Orbit:
    """Points z0, f(z0), ..., f^n_max(z0).

    Iteration stops when the orbit reaches infinity; the step k with
    f^k(z0) = infinity is recorded. A return within ``period_tol`` (chordal)
    of z0 records the period.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    start = as_point(z0)
    if start.is_inf:
        return Orbit(start, (start,), Termination.POLE_HIT, pole_step=0)
    points = [start]
    z = start.z
    period = None
    for n in range(1, n_max + 1):
        z = m.apply_complex(z, pole_tol)
        if z is None:
            points.append(INF)
            return Orbit(start, tuple(points), Termination.POLE_HIT, pole_step=n, period=period)
        p = SpherePoint.finite(z)
        points.append(p)
        if period is None and chordal_distance(p, start) <= period_tol:
            period = n
            if stop_on_period:
                break
    reason = Termination.PERIOD_DETECTED if period is not None else Termination.LENGTH_REACHED
    return Orbit(start, tuple(points), reason, period=period)


def _distance(z: complex | None, w: complex | None) -> float:
    if z is None or w is None or abs(z) > FAR_FIELD or abs(w) > FAR_FIELD:
        return chordal_distance(INF if z is None else z, INF if w is None else w)
    return abs(z - w)


def find_recurrence(
    m: NormalizedMobius, a1: PointLike, eps: float, n_max: int, first_only: bool = False
) -> RecurrenceRecord:
    """All n <= n_max with |f^n(a1) - a1| <= eps/2, i.e. returns to the ball of diameter eps.

    With ``first_only`` the scan stops at the first return.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    p = as_point(a1)
    if p.is_inf:
        raise ValueError("recurrence base point must be finite")
    base = p.z
    radius = eps / 2
    times, dists = [], []
    best_n, best = None, math.inf
    z: complex | None = base
    for n in range(1, n_max + 1):
        z = m.apply_complex(z)
        if z is None:
            continue
        dist = abs(z - base)
        if dist <= radius:
            times.append(n)
            dists.append(dist)
            if first_only:
                break
        elif dist < best:
            best_n, best = n, dist
    if not times:
        raise SearchExhaustedError(f"no return within eps/2 = {radius:g} in {n_max} steps", best_n, best)
    return RecurrenceRecord(base, radius, tuple(times), tuple(dists))


def density_witness(
    m: NormalizedMobius,
    z0: PointLike,
    target: PointLike,
    delta: float,
    n_max: int,
    membership_tol: float = 1e-9,
) -> int:
    """Least n in 1..n_max with f^n(z0) within delta of target.

    Both points must lie on the same invariant set of the elliptic map m.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    _require_elliptic(m)
    r0, rt = circle_parameter(m, z0), circle_parameter(m, target)
    if not abs(r0 - rt) <= membership_tol * (1 + max(r0, rt)):
        raise InvalidTargetError(
            f"start and target lie on different invariant sets (r = {r0:.12g} vs {rt:.12g})"
        )
    s, t = as_point(z0), as_point(target)
    z = None if s.is_inf else s.z
    w = None if t.is_inf else t.z
    best_n, best = None, math.inf
    for n in range(1, n_max + 1):
        z = m.apply_complex(z)
        dist = _distance(z, w)
        if dist < delta:
            return n
        if dist < best:
            best_n, best = n, dist
    raise SearchExhaustedError(f"target not reached within {delta:g} in {n_max} steps", best_n, best)


def star_discrepancy_of(x) -> float:
    """Star discrepancy of points in [0, 1) by the sorted-sample formula."""
    x = np.sort(np.asarray(x, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("need at least one point")
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(x - (i - 1) / n)), np.max(np.abs(x - i / n))))


def rotation_points(theta: float, n: int) -> np.ndarray:
    """Fractional parts of k theta / 2pi for k = 1..n."""
    step = theta / (2 * np.pi)
    x = np.mod(np.arange(1, n + 1, dtype=float) * step, 1.0)
    # mod of a tiny negative can round up to exactly 1.0
    x[x >= 1.0] = 0.0
    return x


def star_discrepancy(theta: float, n: int) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    return star_discrepancy_of(rotation_points(theta, n))


def detect_periodic_orbit(
    m: NormalizedMobius, z0: PointLike, tol: float = 1e-9, n_max: int = 10**4
) -> Union[Period, Aperiodic]:
    if not tol > 0:
        raise ValueError("tol must be positive")
    start = as_point(z0)
    z = None if start.is_inf else start.z
    for q in range(1, n_max + 1):
        z = m.apply_complex(z)
        if chordal_distance(INF if z is None else z, start) <= tol:
            return Period(q)
    return Aperiodic()
