"""Named maps used by the CLI, the experiments and the tests."""

from __future__ import annotations

import math

from .mobius import NormalizedMobius, RawMobius, as_normalized
from .sphere import point_from_json

SQRT3 = math.sqrt(3.0)

# half-angle psi with 2*psi = 2pi - 2pi*(sqrt5 - 1)/2, so the multiplier
# 1/(c alpha + d)^2 = exp(-2i psi) turns by the golden fraction of a circle
_GOLDEN_PSI = math.pi * (3.0 - math.sqrt(5.0)) / 2.0
GOLDEN_FRACTION = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_ANGLE = 2.0 * math.pi * GOLDEN_FRACTION

PRESET_COEFFICIENTS: dict[str, tuple[float, float, float, float]] = {
    "p": (SQRT3, -2.0, 2.0, -SQRT3),
    "q": (0.0, -1.0, 1.0, -SQRT3),
    "r": (-1.0, -1.0, 1.0, 0.0),
    "golden": (math.cos(_GOLDEN_PSI), -math.sin(_GOLDEN_PSI) ** 2, 1.0, math.cos(_GOLDEN_PSI)),
    # cos(theta/2) = 1/4, so theta/2pi is irrational (Niven)
    "trace-half": (0.25, -15.0 / 16.0, 1.0, 0.25),
}

FINITE_ORDERS = {"p": 2, "q": 6, "r": 3}


def preset(name: str) -> NormalizedMobius:
    try:
        a, b, c, d = PRESET_COEFFICIENTS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESET_COEFFICIENTS)}") from None
    return NormalizedMobius(a, b, c, d)


def map_from_json(obj) -> NormalizedMobius:
    """Build a map from a preset name or a {"a": .., "b": .., "c": .., "d": ..} literal."""
    if isinstance(obj, str):
        return preset(obj)
    if not isinstance(obj, dict):
        raise ValueError(f"map must be a preset name or an object, got {type(obj).__name__}")
    keys = set(obj)
    if keys != set("abcd"):
        raise ValueError(f"map literal needs exactly the keys a, b, c, d (got {sorted(keys)})")
    coeffs = []
    for k in "abcd":
        p = point_from_json(obj[k])
        if p.is_inf:
            raise ValueError(f"coefficient {k} cannot be infinite")
        coeffs.append(p.z)
    return as_normalized(RawMobius(*coeffs))


def map_to_json(m: NormalizedMobius) -> dict:
    return {k: {"re": v.real, "im": v.imag} for k, v in zip("abcd", m.coefficients)}
