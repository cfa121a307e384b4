"""Elliptic Möbius maps on the Riemann sphere and pseudo-orbit experiments."""

from .geometry import (
    ExtendedLine,
    InvariantCircle,
    circle_parameter,
    circle_point,
    invariant_circle,
    invariant_line,
    on_line,
    separation_L,
)
from .hyers_ulam import (
    ConstructionError,
    Drift,
    ExperimentReport,
    PeriodicLoop,
    build_drift_pseudo_orbit,
    build_periodic_pseudo_orbit,
    defect,
    drift_experiment,
    finite_order_presets,
    off_line_experiment,
    separation_experiment,
)
from .mobius import (
    IDENTITY,
    EllipticNormalForm,
    FixedPointPair,
    InvalidMapError,
    Irrational,
    MapClass,
    MobiusError,
    NormalizedMobius,
    Rational,
    RawMobius,
    SingularDerivativeError,
    UnsupportedMapError,
    apply,
    classify,
    compose,
    conjugator,
    derivative_at,
    detect_rational_rotation,
    elliptic_normal_form,
    fixed_points,
    inverse,
    multiplier,
    normalize,
    power,
    rotation_angle,
    trace,
)
from .orbits import (
    Aperiodic,
    Orbit,
    Period,
    RecurrenceRecord,
    SearchExhaustedError,
    density_witness,
    detect_periodic_orbit,
    find_recurrence,
    iterate_orbit,
    star_discrepancy,
)
from .presets import preset
from .sphere import INF, SpherePoint, arc_distance, chordal_distance

__version__ = "0.1.0"

__all__ = [
    "Aperiodic",
    "apply",
    "arc_distance",
    "build_drift_pseudo_orbit",
    "build_periodic_pseudo_orbit",
    "chordal_distance",
    "circle_parameter",
    "circle_point",
    "classify",
    "compose",
    "conjugator",
    "ConstructionError",
    "defect",
    "density_witness",
    "derivative_at",
    "detect_periodic_orbit",
    "detect_rational_rotation",
    "Drift",
    "drift_experiment",
    "elliptic_normal_form",
    "EllipticNormalForm",
    "ExperimentReport",
    "ExtendedLine",
    "find_recurrence",
    "finite_order_presets",
    "fixed_points",
    "FixedPointPair",
    "IDENTITY",
    "INF",
    "InvalidMapError",
    "invariant_circle",
    "invariant_line",
    "InvariantCircle",
    "inverse",
    "Irrational",
    "iterate_orbit",
    "MapClass",
    "MobiusError",
    "multiplier",
    "normalize",
    "NormalizedMobius",
    "off_line_experiment",
    "on_line",
    "Orbit",
    "Period",
    "PeriodicLoop",
    "power",
    "preset",
    "Rational",
    "RawMobius",
    "RecurrenceRecord",
    "rotation_angle",
    "SearchExhaustedError",
    "separation_experiment",
    "separation_L",
    "SingularDerivativeError",
    "SpherePoint",
    "star_discrepancy",
    "trace",
    "UnsupportedMapError",
]
