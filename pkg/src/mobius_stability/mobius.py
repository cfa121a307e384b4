"""Algebra of Möbius maps z -> (az + b)/(cz + d) normalized to ad - bc = 1."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .sphere import INF, PointLike, SpherePoint, as_point

__all__ = [
    "MobiusError",
    "InvalidMapError",
    "UnsupportedMapError",
    "SingularDerivativeError",
    "RawMobius",
    "NormalizedMobius",
    "MapClass",
    "FixedPointPair",
    "Rational",
    "Irrational",
    "EllipticNormalForm",
    "IDENTITY",
    "normalize",
    "as_normalized",
    "apply",
    "compose",
    "inverse",
    "power",
    "trace",
    "classify",
    "fixed_points",
    "multiplier",
    "rotation_angle",
    "detect_rational_rotation",
    "derivative_at",
    "conjugator",
    "elliptic_normal_form",
    "same_action",
]

DET_REL_TOL = 1e-14
NORMALIZED_DET_TOL = 1e-12
CLASS_TOL = 1e-10
POLE_TOL = 1e-12
RATIONAL_TOL = 1e-12
RATIONAL_Q_MAX = 10**6


class MobiusError(ValueError):
    """Base class for invalid or unsupported maps."""


class InvalidMapError(MobiusError):
    pass


class UnsupportedMapError(MobiusError):
    pass


class SingularDerivativeError(MobiusError):
    pass


class MapClass(str, Enum):
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    PURELY_LOXODROMIC = "purely-loxodromic"
    AFFINE = "affine"


@dataclass(frozen=True)
class RawMobius:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            z = complex(getattr(self, name))
            if not cmath.isfinite(z):
                raise InvalidMapError(f"coefficient {name} is not finite: {z!r}")
            object.__setattr__(self, name, z)
        scale = max(abs(self.a * self.d), abs(self.b * self.c))
        if scale == 0.0 or abs(self.det) <= DET_REL_TOL * scale:
            raise InvalidMapError(f"singular coefficient matrix (det = {self.det!r})")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True)
class NormalizedMobius:
    """A Möbius map whose coefficient matrix lies in SL(2, C).

    Coefficients are taken as given; use :func:`normalize` to rescale an
    arbitrary nonsingular quadruple.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            z = complex(getattr(self, name))
            if not cmath.isfinite(z):
                raise InvalidMapError(f"coefficient {name} is not finite: {z!r}")
            object.__setattr__(self, name, z)
        if abs(self.a * self.d - self.b * self.c - 1.0) > NORMALIZED_DET_TOL:
            raise InvalidMapError(
                f"determinant {self.a * self.d - self.b * self.c!r} is not 1; use normalize()"
            )

    @property
    def coefficients(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    @property
    def is_affine(self) -> bool:
        return _is_affine(self)

    def apply_complex(self, z: complex | None, pole_tol: float = POLE_TOL) -> complex | None:
        """Fast path of :func:`apply` on bare complex numbers; ``None`` is infinity."""
        a, b, c, d = self.a, self.b, self.c, self.d
        if z is None:
            return None if c == 0 else a / c
        den = c * z + d
        if abs(den) <= pole_tol * (1.0 + abs(z)):
            return None
        w = (a * z + b) / den
        if not cmath.isfinite(w):
            return None
        return w

    def __call__(self, z: PointLike) -> SpherePoint:
        return apply(self, z)

    def __matmul__(self, other: "NormalizedMobius") -> "NormalizedMobius":
        return compose(self, other)


IDENTITY = NormalizedMobius(1, 0, 0, 1)


def _is_affine(m) -> bool:
    scale = max(abs(m.a), abs(m.b), abs(m.d), 1.0)
    return abs(m.c) <= CLASS_TOL * scale


def normalize(raw: RawMobius | tuple) -> NormalizedMobius:
    """Divide by a square root of the determinant.

    The root is chosen so the trace has nonnegative real part, with ties
    broken toward nonnegative imaginary part.
    """
    if not isinstance(raw, RawMobius):
        raw = RawMobius(*raw)
    s = cmath.sqrt(raw.det)
    a, b, c, d = (raw.a / s, raw.b / s, raw.c / s, raw.d / s)
    t = a + d
    tie = abs(t.real) <= 1e-14 * max(1.0, abs(t))
    if (not tie and t.real < 0) or (tie and t.imag < 0):
        a, b, c, d = -a, -b, -c, -d
    return _renormalized(a, b, c, d)


def as_normalized(coeffs) -> NormalizedMobius:
    """Use the coefficients verbatim when det is already 1, else normalize."""
    if isinstance(coeffs, NormalizedMobius):
        return coeffs
    if isinstance(coeffs, RawMobius):
        coeffs = (coeffs.a, coeffs.b, coeffs.c, coeffs.d)
    a, b, c, d = (complex(x) for x in coeffs)
    if abs(a * d - b * c - 1.0) <= NORMALIZED_DET_TOL:
        return NormalizedMobius(a, b, c, d)
    return normalize(RawMobius(a, b, c, d))


def _renormalized(a, b, c, d) -> NormalizedMobius:
    # rescale by the root of det nearest 1 so signs are preserved
    det = a * d - b * c
    if det != 1:
        s = cmath.sqrt(det)
        a, b, c, d = a / s, b / s, c / s, d / s
    return NormalizedMobius(a, b, c, d)


def apply(m: NormalizedMobius, z: PointLike, pole_tol: float = POLE_TOL) -> SpherePoint:
    """Evaluate the map on the sphere: -d/c goes to infinity, infinity to a/c."""
    p = as_point(z)
    w = m.apply_complex(None if p.is_inf else p.z, pole_tol)
    return INF if w is None else SpherePoint.finite(w)


def compose(m1: NormalizedMobius, m2: NormalizedMobius) -> NormalizedMobius:
    """The map z -> m1(m2(z))."""
    a = m1.a * m2.a + m1.b * m2.c
    b = m1.a * m2.b + m1.b * m2.d
    c = m1.c * m2.a + m1.d * m2.c
    d = m1.c * m2.b + m1.d * m2.d
    return _renormalized(a, b, c, d)


def inverse(m: NormalizedMobius) -> NormalizedMobius:
    return NormalizedMobius(m.d, -m.b, -m.c, m.a)


def power(m: NormalizedMobius, n: int) -> NormalizedMobius:
    """n-fold composition by repeated squaring; negative n uses the inverse."""
    if n < 0:
        return power(inverse(m), -n)
    result, base = IDENTITY, m
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def trace(m: NormalizedMobius) -> complex:
    return m.a + m.d


def classify(m: NormalizedMobius, tol: float = CLASS_TOL) -> MapClass:
    if _is_affine(m):
        return MapClass.AFFINE
    t = trace(m)
    if abs(t - 2) <= tol or abs(t + 2) <= tol:
        return MapClass.PARABOLIC
    if abs(t.imag) > tol:
        return MapClass.PURELY_LOXODROMIC
    if abs(t.real) > 2:
        return MapClass.HYPERBOLIC
    return MapClass.ELLIPTIC


@dataclass(frozen=True)
class FixedPointPair:
    alpha: complex
    beta: complex


def fixed_points(m: NormalizedMobius) -> FixedPointPair:
    """Roots (a - d +/- sqrt((a+d)^2 - 4)) / 2c; alpha takes the + branch."""
    if _is_affine(m):
        raise UnsupportedMapError("affine map (c = 0) unsupported: fixed points need c != 0")
    a, b, c, d = m.coefficients
    disc = (a + d) ** 2 - 4
    if abs(disc.imag) <= 1e-15 * max(1.0, abs(disc)):
        # signed-zero noise would flip the principal branch
        disc = complex(disc.real, 0.0)
    root = cmath.sqrt(disc)
    return FixedPointPair((a - d + root) / (2 * c), (a - d - root) / (2 * c))


def _is_identity_action(m: NormalizedMobius, tol: float = CLASS_TOL) -> bool:
    return abs(m.b) <= tol and abs(m.c) <= tol and abs(m.a - m.d) <= tol


def _require_elliptic(m: NormalizedMobius) -> None:
    cls = classify(m)
    if cls is not MapClass.ELLIPTIC:
        raise UnsupportedMapError(f"{cls.value} map unsupported: operation needs an elliptic map")


def multiplier(m: NormalizedMobius) -> complex:
    """Derivative at alpha, 1/(c alpha + d)^2; the identity map has multiplier 1."""
    if _is_identity_action(m):
        return 1 + 0j
    _require_elliptic(m)
    alpha = fixed_points(m).alpha
    return 1.0 / (m.c * alpha + m.d) ** 2


def rotation_angle(m: NormalizedMobius) -> float:
    theta = cmath.phase(multiplier(m))
    if theta <= -math.pi + 1e-12:
        theta = math.pi
    return theta


@dataclass(frozen=True)
class Rational:
    p: int
    q: int

    def __str__(self):
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class Irrational:
    def __str__(self):
        return "irrational"


def _convergents(x: float):
    """Continued-fraction convergents p/q of a float, exact integer arithmetic."""
    frac = Fraction(x)
    h0, k0, h1, k1 = 0, 1, 1, 0
    while True:
        a = math.floor(frac)
        h0, k0, h1, k1 = h1, k1, a * h1 + h0, a * k1 + k0
        yield h1, k1
        rem = frac - a
        if rem == 0:
            return
        frac = 1 / rem


def detect_rational_rotation(
    theta: float, tol: float = RATIONAL_TOL, q_max: int = RATIONAL_Q_MAX
) -> Union[Rational, Irrational]:
    """Decide whether theta/2pi is rational with denominator at most q_max.

    Walks the convergents p/q of theta/2pi and returns the first one whose
    angle 2pi p/q lies within ``tol`` radians of theta.
    """
    if tol <= 0 or q_max < 1:
        raise ValueError("tol must be positive and q_max at least 1")
    for p, q in _convergents(theta / (2 * math.pi)):
        if q > q_max:
            break
        if abs(theta - 2 * math.pi * p / q) <= tol:
            g = math.gcd(p, q)
            return Rational(p // g, q // g)
    return Irrational()


def derivative_at(m: NormalizedMobius, z: PointLike, pole_tol: float = POLE_TOL) -> complex:
    p = as_point(z)
    if p.is_inf:
        raise SingularDerivativeError("derivative at infinity is not defined in this chart")
    den = m.c * p.z + m.d
    if abs(den) <= pole_tol * (1.0 + abs(p.z)):
        raise SingularDerivativeError(f"{p.z!r} is at the pole -d/c")
    return 1.0 / den**2


def conjugator(m: NormalizedMobius) -> NormalizedMobius:
    """h(z) = (z - alpha)/(z - beta), which turns an elliptic m into w -> k w."""
    fp = fixed_points(m)
    if fp.alpha == fp.beta:
        raise UnsupportedMapError("fixed points coincide; no rotation normal form")
    return normalize(RawMobius(1, -fp.alpha, 1, -fp.beta))


@dataclass(frozen=True)
class EllipticNormalForm:
    alpha: complex
    beta: complex
    k: complex
    theta: float
    verdict: Union[Rational, Irrational]
    tol: float
    q_max: int

    @property
    def order(self) -> int | None:
        return self.verdict.q if isinstance(self.verdict, Rational) else None


def elliptic_normal_form(
    m: NormalizedMobius, tol: float = RATIONAL_TOL, q_max: int = RATIONAL_Q_MAX
) -> EllipticNormalForm:
    _require_elliptic(m)
    fp = fixed_points(m)
    theta = rotation_angle(m)
    return EllipticNormalForm(
        fp.alpha, fp.beta, multiplier(m), theta, detect_rational_rotation(theta, tol, q_max), tol, q_max
    )


def same_action(m1: NormalizedMobius, m2: NormalizedMobius, tol: float = 1e-9) -> bool:
    """Matrices agree up to the sign ambiguity of SL(2, C)."""
    x, y = m1.coefficients, m2.coefficients
    return all(abs(u - v) <= tol for u, v in zip(x, y)) or all(
        abs(u + v) <= tol for u, v in zip(x, y)
    )
