"""Approximate solutions that stay away from every true solution.

Two constructions are provided. A :class:`PeriodicLoop` follows the true
orbit of a point until it returns close to its start and then jumps back,
so it is periodic and bounded while true orbits of an irrational elliptic
map are dense on the invariant line. A :class:`Drift` moves by eps each
step and escapes any periodic solution linearly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .geometry import circle_parameter, circle_point, invariant_line, on_line, separation_L
from .mobius import (
    IDENTITY,
    NormalizedMobius,
    Rational,
    UnsupportedMapError,
    _require_elliptic,
    compose,
    detect_rational_rotation,
    power,
    rotation_angle,
    same_action,
)
from .orbits import Aperiodic, SearchExhaustedError, detect_periodic_orbit, find_recurrence
from .presets import FINITE_ORDERS, preset
from .sphere import PointLike, as_point

__all__ = [
    "ConstructionError",
    "PseudoOrbit",
    "PeriodicLoop",
    "Drift",
    "ExperimentReport",
    "FiniteOrderPreset",
    "build_periodic_pseudo_orbit",
    "build_drift_pseudo_orbit",
    "defect",
    "separation_experiment",
    "drift_experiment",
    "off_line_experiment",
    "finite_order_presets",
    "subsample_indices",
]

FULL_TRACE_STEPS = 10**4
LOG_POINTS_PER_DECADE = 100


class ConstructionError(ValueError):
    """The requested pseudo-orbit cannot be built for this map."""

    def __init__(self, message: str, closest_n: int | None = None, closest_distance: float | None = None):
        super().__init__(message)
        self.closest_n = closest_n
        self.closest_distance = closest_distance


class PseudoOrbit:
    kind: str
    eps: float

    def value_at(self, n: int) -> complex:
        raise NotImplementedError

    def values(self, count: int) -> np.ndarray:
        return np.array([self.value_at(n) for n in range(count)], dtype=complex)


@dataclass(frozen=True)
class PeriodicLoop(PseudoOrbit):
    """a_0 = head, then the loop a_1 .. a_n1 repeated forever."""

    head: complex
    loop: tuple[complex, ...]
    eps: float
    kind: str = field(default="periodic-loop", init=False)

    def __post_init__(self):
        if not self.loop:
            raise ValueError("loop must be nonempty")

    @property
    def period(self) -> int:
        return len(self.loop)

    def value_at(self, n: int) -> complex:
        if n < 0:
            raise IndexError(n)
        if n == 0:
            return self.head
        return self.loop[(n - 1) % len(self.loop)]

    def values(self, count: int) -> np.ndarray:
        out = np.empty(count, dtype=complex)
        if count == 0:
            return out
        out[0] = self.head
        idx = np.arange(count - 1) % len(self.loop)
        out[1:] = np.asarray(self.loop, dtype=complex)[idx]
        return out

    def value_set(self) -> frozenset[complex]:
        return frozenset((self.head, *self.loop))


@dataclass(frozen=True)
class Drift(PseudoOrbit):
    """d_n = d0 + n eps, computed exactly and rounded once."""

    d0: float
    eps: float
    kind: str = field(default="drift", init=False)

    def exact_value_at(self, n: int) -> Fraction:
        return Fraction(self.d0) + n * Fraction(self.eps)

    @cached_property
    def _scaled(self) -> tuple[int, int, int]:
        # d0 and eps are dyadic: d_n = (A + n B) / 2^K with integers A, B
        (p0, q0), (pe, qe) = self.d0.as_integer_ratio(), self.eps.as_integer_ratio()
        den = max(q0, qe)
        return p0 * (den // q0), pe * (den // qe), den

    def value_at(self, n: int) -> complex:
        if n < 0:
            raise IndexError(n)
        a, b, den = self._scaled
        # int / int is correctly rounded, so this equals float(exact_value_at(n))
        return complex((a + n * b) / den)


@dataclass(frozen=True)
class FiniteOrderPreset:
    name: str
    map: NormalizedMobius
    order: int


@dataclass
class ExperimentReport:
    kind: str
    n_steps: int
    eps: float
    trace_n: list[int]
    trace_sep: list[float]
    max_separation: float
    argmax: int
    thresholds: list[float]
    crossings: list[int | None]
    pole_step: int | None = None
    defect: float | None = None
    L: float | None = None
    count_ge_L: int | None = None
    period: int | None = None
    extra: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def crossing(self, threshold: float) -> int | None:
        return self.crossings[self.thresholds.index(threshold)]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_steps": self.n_steps,
            "eps": self.eps,
            "max_separation": self.max_separation,
            "argmax": self.argmax,
            "crossings": [{"threshold": t, "n": n} for t, n in zip(self.thresholds, self.crossings)],
            "pole_step": self.pole_step,
            "defect": self.defect,
            "L": self.L,
            "count_ge_L": self.count_ge_L,
            "period": self.period,
            "extra": self.extra,
            "trace": {"n": self.trace_n, "sep": self.trace_sep},
            "meta": self.meta,
        }

    def trace_rows(self):
        return zip(self.trace_n, self.trace_sep)


def subsample_indices(n_steps: int, full: int = FULL_TRACE_STEPS, per_decade: int = LOG_POINTS_PER_DECADE) -> np.ndarray:
    """Every index up to ``full``, then a logarithmic grid up to n_steps."""
    head = np.arange(min(n_steps, full) + 1)
    if n_steps <= full:
        return head
    decades = math.log10(n_steps) - math.log10(full)
    grid = np.logspace(math.log10(full), math.log10(n_steps), int(math.ceil(decades * per_decade)) + 1)
    tail = np.unique(np.round(grid).astype(np.int64))
    tail = tail[(tail > full) & (tail <= n_steps)]
    if tail.size == 0 or tail[-1] != n_steps:
        tail = np.append(tail, n_steps)
    return np.concatenate([head, tail])


def build_periodic_pseudo_orbit(
    m: NormalizedMobius, a0: PointLike, eps: float, n_max: int = 10**7
) -> PeriodicLoop:
    """Follow the orbit of a1 = f(a0) until it first returns within eps/2 of a1, then loop."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    _require_elliptic(m)
    verdict = detect_rational_rotation(rotation_angle(m))
    if isinstance(verdict, Rational):
        raise ConstructionError(
            f"rotation number {verdict} is rational; every orbit is periodic, "
            "use build_drift_pseudo_orbit instead"
        )
    start = as_point(a0)
    if start.is_inf:
        raise ConstructionError("a0 must be finite")
    a1 = m.apply_complex(start.z)
    if a1 is None:
        raise ConstructionError("f(a0) is infinite: a0 is the pole")
    try:
        rec = find_recurrence(m, a1, eps, n_max, first_only=True)
    except SearchExhaustedError as exc:
        raise ConstructionError(str(exc), exc.closest_n, exc.closest_distance) from exc
    n1 = rec.first
    loop = [a1]
    z = a1
    for _ in range(n1 - 1):
        z = m.apply_complex(z)
        if z is None:
            raise ConstructionError("orbit of a1 reaches infinity before recurring")
        loop.append(z)
    return PeriodicLoop(start.z, tuple(loop), float(eps))


def build_drift_pseudo_orbit(d0: float, eps: float) -> Drift:
    if not eps > 0:
        raise ValueError("eps must be positive")
    return Drift(float(d0), float(eps))


def defect(po: PseudoOrbit, m: NormalizedMobius, n_check: int) -> float:
    """max over n < n_check of |a_{n+1} - f(a_n)|."""
    worst = 0.0
    if isinstance(po, PeriodicLoop):
        # only head -> loop and the loop transitions are distinct
        n_check = min(n_check, po.period + 1)
    for n in range(n_check):
        fa = m.apply_complex(po.value_at(n))
        if fa is None:
            return math.inf
        worst = max(worst, abs(po.value_at(n + 1) - fa))
    return worst


def _run(
    kind: str,
    step: Callable[[complex], complex | None],
    po: PseudoOrbit,
    b0: complex,
    n_steps: int,
    thresholds: Sequence[float],
    L: float | None,
) -> ExperimentReport:
    t0 = time.perf_counter()
    keep = subsample_indices(n_steps)
    keep_set = set(keep.tolist())
    thresholds = [float(t) for t in thresholds]
    crossings: list[int | None] = [None] * len(thresholds)
    pending = sorted(range(len(thresholds)), key=lambda i: thresholds[i])
    trace_n, trace_sep = [], []
    max_sep, argmax = -1.0, 0
    count_L = 0
    pole = None
    if isinstance(po, PeriodicLoop):
        loop, period = po.loop, po.period
        value = lambda n: po.head if n == 0 else loop[(n - 1) % period]  # noqa: E731
    else:
        value = po.value_at
    b: complex | None = b0
    last = 0
    for n in range(n_steps + 1):
        if b is None:
            pole = n
            break
        s = abs(value(n) - b)
        last = n
        if s > max_sep:
            max_sep, argmax = s, n
        if L is not None and s >= L:
            count_L += 1
        while pending and s > thresholds[pending[0]]:
            crossings[pending.pop(0)] = n
        if n in keep_set:
            trace_n.append(n)
            trace_sep.append(s)
        if n < n_steps:
            b = step(b)
    return ExperimentReport(
        kind=kind,
        n_steps=last,
        eps=po.eps,
        trace_n=trace_n,
        trace_sep=trace_sep,
        max_separation=max_sep,
        argmax=argmax,
        thresholds=thresholds,
        crossings=crossings,
        pole_step=pole,
        L=L,
        count_ge_L=count_L if L is not None else None,
        meta={"runtime_s": time.perf_counter() - t0},
    )


def separation_experiment(
    m: NormalizedMobius,
    po: PseudoOrbit,
    b0: PointLike,
    n_steps: int,
    thresholds: Iterable[float] = (),
    L: float | None = None,
) -> ExperimentReport:
    """Track s_n = |a_n - b_n| against the true solution b_{n+1} = f(b_n).

    A pole hit in the true orbit ends the run; ``pole_step`` records the n
    with b_n = infinity.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    start = as_point(b0)
    if start.is_inf:
        raise ValueError("b0 must be finite")
    report = _run(po.kind, m.apply_complex, po, start.z, n_steps, list(thresholds), L)
    if isinstance(po, PeriodicLoop):
        report.defect = defect(po, m, po.period + 1)
        report.period = po.period
    verdict = detect_periodic_orbit(m, start, 1e-9, min(n_steps, 10**4))
    report.extra["true_orbit_period"] = None if isinstance(verdict, Aperiodic) else verdict.q
    return report


def _map_order(m: NormalizedMobius, b0, n_max: int = 10**4) -> int:
    if same_action(m, IDENTITY):
        return 1
    try:
        verdict = detect_rational_rotation(rotation_angle(m))
    except UnsupportedMapError:
        verdict = None
    if isinstance(verdict, Rational):
        return verdict.q
    found = detect_periodic_orbit(m, b0, 1e-9, n_max)
    if isinstance(found, Aperiodic):
        raise ConstructionError("the drift construction needs a periodic true solution; none found")
    return found.q


def drift_experiment(
    m: NormalizedMobius,
    po: Drift,
    b0: PointLike,
    n_steps: int,
    thresholds: Iterable[float] = (),
) -> ExperimentReport:
    """Compare a drift with the constant subsequence c_n = b_{qn} of a period-q solution.

    The true solution of a finite-order map is periodic; sampling it once per
    period gives a constant sequence, which any drift leaves linearly.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    start = as_point(b0)
    if start.is_inf:
        raise ValueError("b0 must be finite")
    q = _map_order(m, start)

    def step(z):
        for _ in range(q):
            z = m.apply_complex(z)
            if z is None:
                return None
        return z

    report = _run("drift", step, po, start.z, n_steps, list(thresholds), None)
    report.period = q
    report.defect = defect(po, IDENTITY, min(n_steps, 10**4))
    return report


def off_line_experiment(
    m: NormalizedMobius,
    r: float,
    po: PseudoOrbit,
    b0: PointLike | None = None,
    n_steps: int = 10**4,
    thresholds: Iterable[float] = (),
    membership_tol: float = 1e-9,
) -> ExperimentReport:
    """Pseudo-orbit on the invariant line against a true orbit on the circle h^-1(C_r).

    Also counts the indices with s_n >= L, L being the distance from the
    fixed point alpha to the line.
    """
    if not 0 < r < 1:
        raise ValueError(f"r must lie in (0, 1), got {r!r}")
    _require_elliptic(m)
    line = invariant_line(m)
    if isinstance(po, PeriodicLoop):
        samples = po.value_set()
    else:
        samples = (po.value_at(0), po.value_at(1))
    for v in samples:
        if not on_line(line, v, membership_tol):
            raise ValueError(f"pseudo-orbit value {v!r} is not on the invariant line")
    start = circle_point(m, r) if b0 is None else as_point(b0)
    r_b0 = circle_parameter(m, start)
    if not abs(r_b0 - r) <= membership_tol * max(1.0, r):
        raise ValueError(f"b0 lies on the circle r = {r_b0:.12g}, not r = {r}")
    L = separation_L(m)
    report = separation_experiment(m, po, start, n_steps, thresholds, L=L)
    report.kind = "off-line"
    report.extra["r"] = r
    report.extra["b0"] = {"re": start.z.real, "im": start.z.imag}
    return report


def finite_order_presets() -> list[FiniteOrderPreset]:
    """The maps p, q, r with their orders, each checked as the least power acting as the identity."""
    out = []
    for name, order in FINITE_ORDERS.items():
        m = preset(name)
        acc = m
        least = 1
        while not same_action(acc, IDENTITY):
            acc = compose(m, acc)
            least += 1
            if least > 64:
                raise AssertionError(f"preset {name} has no small finite order")
        if least != order or not same_action(power(m, order), IDENTITY):
            raise AssertionError(f"preset {name}: expected order {order}, found {least}")
        out.append(FiniteOrderPreset(name, m, order))
    return out
