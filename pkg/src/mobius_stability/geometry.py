"""Invariant line and invariant circles of an elliptic Möbius map."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mobius import NormalizedMobius, _require_elliptic, apply, conjugator, fixed_points, inverse
from .sphere import PointLike, as_point

__all__ = [
    "ExtendedLine",
    "InvariantCircle",
    "invariant_line",
    "on_line",
    "invariant_circle",
    "separation_L",
    "circle_parameter",
    "circle_point",
]

LINE_TOL = 1e-9


@dataclass(frozen=True)
class ExtendedLine:
    """The perpendicular bisector {z : |z - alpha| = |z - beta|} together with infinity."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        if self.alpha == self.beta:
            raise ValueError("an extended line needs two distinct fixed points")

    @property
    def point(self) -> complex:
        return (self.alpha + self.beta) / 2

    @property
    def direction(self) -> complex:
        # unit vector perpendicular to beta - alpha
        u = (self.beta - self.alpha) * 1j
        return u / abs(u)

    def sample(self, t) -> np.ndarray:
        """Points point + t * direction for real parameters t."""
        return self.point + np.asarray(t, dtype=float) * self.direction

    def to_json(self) -> dict:
        return {
            "alpha": {"re": self.alpha.real, "im": self.alpha.imag},
            "beta": {"re": self.beta.real, "im": self.beta.imag},
        }


@dataclass(frozen=True)
class InvariantCircle:
    """Apollonius circle {z : |z - alpha| = r |z - beta|}, the preimage of |w| = r under h."""

    r: float
    center: complex
    radius: float

    def sample(self, count: int, phase: float = 0.0) -> np.ndarray:
        t = phase + 2 * np.pi * np.arange(count) / count
        return self.center + self.radius * np.exp(1j * t)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "center": {"re": self.center.real, "im": self.center.imag},
            "radius": self.radius,
        }


def invariant_line(m: NormalizedMobius) -> ExtendedLine:
    _require_elliptic(m)
    fp = fixed_points(m)
    return ExtendedLine(fp.alpha, fp.beta)


def on_line(line: ExtendedLine, z: PointLike, tol: float = LINE_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    p = as_point(z)
    if p.is_inf:
        return True
    return abs(abs(p.z - line.alpha) - abs(p.z - line.beta)) <= tol * (1 + abs(p.z))


def invariant_circle(m: NormalizedMobius, r: float) -> InvariantCircle:
    if not r > 0:
        raise ValueError(f"circle parameter must be positive, got {r!r}")
    if abs(r - 1) <= 1e-9:
        raise ValueError("r = 1 is the invariant line, not a circle")
    _require_elliptic(m)
    fp = fixed_points(m)
    alpha, beta = fp.alpha, fp.beta
    r2 = r * r
    center = (alpha - r2 * beta) / (1 - r2)
    radius = r * abs(alpha - beta) / abs(1 - r2)
    return InvariantCircle(float(r), complex(center), float(radius))


def circle_parameter(m: NormalizedMobius, z: PointLike) -> float:
    """The r with z on h^-1(C_r); infinity lies on the line, r = 1."""
    h = conjugator(m)
    w = apply(h, z)
    return float("inf") if w.is_inf else abs(w.z)


def separation_L(m: NormalizedMobius) -> float:
    """Distance from the fixed point alpha to the invariant line."""
    _require_elliptic(m)
    fp = fixed_points(m)
    return abs(fp.alpha - fp.beta) / 2


def circle_point(m: NormalizedMobius, r: float, phase: float = 0.0):
    """h^-1(r e^{i phase}), a point on the invariant circle with parameter r."""
    h_inv = inverse(conjugator(m))
    return apply(h_inv, r * complex(np.cos(phase), np.sin(phase)))
