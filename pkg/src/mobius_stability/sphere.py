"""Points of the Riemann sphere and the two metrics used throughout the package."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "SpherePoint",
    "INF",
    "as_point",
    "chordal_distance",
    "arc_distance",
    "point_to_json",
    "point_from_json",
    "POINT_TOL",
]

# default tolerance for point equality in comparisons
POINT_TOL = 1e-9
UNIT_CIRCLE_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class SpherePoint:
    """A finite complex number or the point at infinity.

    Infinity is a tag, never a large magnitude. Use :data:`INF` or
    :meth:`SpherePoint.finite` rather than the constructor.
    """

    z: complex = 0j
    is_inf: bool = False

    def __post_init__(self):
        if self.is_inf:
            if self.z != 0:
                raise ValueError("infinite SpherePoint carries no finite value")
        elif not cmath.isfinite(self.z):
            raise ValueError(f"non-finite value {self.z!r}; use INF for the point at infinity")

    @classmethod
    def finite(cls, z) -> "SpherePoint":
        return cls(complex(z), False)

    @property
    def value(self) -> complex:
        if self.is_inf:
            raise ValueError("the point at infinity has no finite value")
        return self.z

    def __repr__(self):
        return "SpherePoint(inf)" if self.is_inf else f"SpherePoint({self.z!r})"


INF = SpherePoint(0j, True)

PointLike = Union[SpherePoint, complex, float, int, str]


def as_point(x: PointLike) -> SpherePoint:
    """Coerce numbers, ``"inf"`` and SpherePoints to a SpherePoint."""
    if isinstance(x, SpherePoint):
        return x
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        return SpherePoint.finite(complex(x.replace(" ", "")))
    z = complex(x)
    if not cmath.isfinite(z):
        return INF
    return SpherePoint.finite(z)


def chordal_distance(p: PointLike, q: PointLike) -> float:
    """Chordal distance on the unit-diameter-2 Riemann sphere, in [0, 2]."""
    p, q = as_point(p), as_point(q)
    if p.is_inf and q.is_inf:
        return 0.0
    if p.is_inf or q.is_inf:
        w = q.z if p.is_inf else p.z
        return 2.0 / math.hypot(1.0, abs(w))
    z, w = p.z, q.z
    if abs(z) > 1.0 and abs(w) > 1.0:
        # z -> 1/z is a chordal isometry; keeps magnitudes small
        z, w = 1.0 / z, 1.0 / w
    d = 2.0 * abs(z - w) / (math.hypot(1.0, abs(z)) * math.hypot(1.0, abs(w)))
    return min(d, 2.0)


def arc_distance(u: complex, v: complex, tol: float = UNIT_CIRCLE_TOL) -> float:
    """Shortest arc length between two points of the unit circle, in [0, pi]."""
    u, v = complex(u), complex(v)
    for w in (u, v):
        if abs(abs(w) - 1.0) > tol:
            raise ValueError(f"{w!r} is not on the unit circle (|w| = {abs(w)!r})")
    if u == v:
        return 0.0
    # angle of v/u is the signed difference, already folded into (-pi, pi]
    return abs(cmath.phase(v * u.conjugate()))


def point_to_json(p: PointLike):
    p = as_point(p)
    if p.is_inf:
        return "inf"
    return {"re": p.z.real, "im": p.z.imag}


def point_from_json(obj) -> SpherePoint:
    if isinstance(obj, str):
        if obj == "inf":
            return INF
        raise ValueError(f"unrecognized point literal {obj!r}")
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise ValueError(f"unexpected keys in point literal: {sorted(extra)}")
        return SpherePoint.finite(complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0))))
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return as_point(obj)
    raise ValueError(f"unrecognized point literal {obj!r}")
