"""Command-line front end: classify, orbit, geometry, experiment, discrepancy.

Exit codes: 0 success, 2 invalid input or unsupported map class, 3 the true
orbit reached infinity, 4 search exhausted or result inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .geometry import circle_point, invariant_circle, invariant_line, on_line, separation_L
from .hyers_ulam import (
    ConstructionError,
    build_drift_pseudo_orbit,
    build_periodic_pseudo_orbit,
    drift_experiment,
    off_line_experiment,
    separation_experiment,
)
from .mobius import (
    IDENTITY,
    MapClass,
    MobiusError,
    NormalizedMobius,
    apply,
    classify,
    elliptic_normal_form,
    fixed_points,
    power,
    same_action,
    trace,
)
from .orbits import Termination, iterate_orbit, star_discrepancy
from .presets import GOLDEN_ANGLE, PRESET_COEFFICIENTS, map_from_json, map_to_json
from .sphere import INF, SpherePoint, chordal_distance, point_from_json, point_to_json

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_POLE = 3
EXIT_INCONCLUSIVE = 4

DEFAULTS = {
    "orbit_steps": 100,
    "experiment_steps": 10**4,
    "discrepancy_steps": 1000,
    "eps": 1e-3,
    "thresholds": [1.0, 10.0, 1000.0],
    "off_line_r": 0.5,
    "tol": 1e-12,
    "q_max": 10**6,
    "pole_tol": 1e-12,
    "n_max": 10**7,
    "seed": 0,
    "samples": 1000,
}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _cnum(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _clean(obj):
    """JSON-safe copy: non-finite floats become strings, numpy scalars become Python."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, complex):
        return _cnum(obj)
    return obj


def parse_point(text) -> SpherePoint:
    """Accept 'inf', JSON {"re", "im"}, or a complex literal like 1+i, -0.5j, 2."""
    if isinstance(text, SpherePoint):
        return text
    if not isinstance(text, str):
        return point_from_json(text)
    s = text.strip()
    if s.startswith("{"):
        return point_from_json(json.loads(s))
    if s.lower() in ("inf", "infinity"):
        return INF
    s = s.replace(" ", "").replace("i", "j")
    if s.endswith("j") and (len(s) == 1 or s[-2] in "+-"):
        s = s[:-1] + "1j"
    try:
        return SpherePoint.finite(complex(s))
    except ValueError:
        raise CliError(f"cannot parse point {text!r}") from None


def load_map(source) -> NormalizedMobius:
    """A preset name, an inline JSON literal, or a path to a JSON file."""
    if isinstance(source, (dict, NormalizedMobius)):
        return source if isinstance(source, NormalizedMobius) else map_from_json(source)
    s = str(source).strip()
    try:
        if s in PRESET_COEFFICIENTS:
            return map_from_json(s)
        if s.startswith("{"):
            return map_from_json(json.loads(s))
        path = Path(s)
        if path.is_file():
            return map_from_json(json.loads(path.read_text()))
    except (ValueError, KeyError) as exc:
        raise CliError(f"invalid map: {exc}") from None
    raise CliError(f"unknown map {s!r}: not a preset ({', '.join(PRESET_COEFFICIENTS)}), JSON literal or file")


@dataclass
class RunConfig:
    """Experiment parameters, as read from a JSON config or from flags."""

    map: object = None
    kind: str = "periodic-loop"
    eps: float = DEFAULTS["eps"]
    a0: object = None
    b0: object = None
    steps: int = DEFAULTS["experiment_steps"]
    thresholds: list = field(default_factory=lambda: list(DEFAULTS["thresholds"]))
    r: float | None = None
    n_max: int = DEFAULTS["n_max"]
    seed: int = DEFAULTS["seed"]

    KINDS = ("periodic-loop", "drift", "off-line")

    @classmethod
    def from_json(cls, obj: dict) -> "RunConfig":
        if not isinstance(obj, dict):
            raise CliError("experiment config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise CliError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**obj)
        cfg.validate()
        return cfg

    def validate(self):
        if self.map is None:
            raise CliError("config needs a map")
        if self.kind not in self.KINDS:
            raise CliError(f"kind must be one of {self.KINDS}, got {self.kind!r}")
        try:
            self.eps = float(self.eps)
            self.steps = int(self.steps)
            self.n_max = int(self.n_max)
            self.seed = int(self.seed)
            self.thresholds = [float(t) for t in self.thresholds]
            self.r = None if self.r is None else float(self.r)
        except (TypeError, ValueError) as exc:
            raise CliError(f"bad numeric parameter: {exc}") from None
        if not self.eps > 0:
            raise CliError("eps must be positive")
        if self.steps < 1:
            raise CliError("steps must be at least 1")


def _emit_json(obj, out):
    text = json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"
    _write(text, out)


def _write(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    _write(buf.getvalue(), out)


def _resolve_map(args) -> NormalizedMobius:
    if args.map and args.preset:
        raise CliError("give either --map or --preset, not both")
    source = args.map or args.preset
    if source is None:
        raise CliError("a map is required (--map or --preset)")
    return load_map(source)


def _sample_points(rng, count):
    return rng.normal(size=count) + 1j * rng.normal(size=count)


def cmd_classify(args) -> int:
    m = _resolve_map(args)
    cls = classify(m)
    if cls is MapClass.AFFINE:
        raise CliError("affine map unsupported (c = 0)")
    report = {
        "map": map_to_json(m),
        "trace": _cnum(trace(m)),
        "class": cls.value,
    }
    fp = fixed_points(m)
    report["fixed_points"] = {"alpha": _cnum(fp.alpha), "beta": _cnum(fp.beta)}
    if cls is MapClass.ELLIPTIC:
        nf = elliptic_normal_form(m, args.tol, args.q_max)
        report.update(
            multiplier=_cnum(nf.k),
            rotation_angle=nf.theta,
            rationality=str(nf.verdict),
            order=nf.order,
            tol=nf.tol,
            q_max=nf.q_max,
        )
        if nf.order is not None:
            mq = power(m, nf.order)
            rng = np.random.default_rng(args.seed)
            pts = _sample_points(rng, DEFAULTS["samples"])
            worst = max(chordal_distance(apply(mq, z), z) for z in pts)
            report["order_check"] = {
                "seed": args.seed,
                "samples": len(pts),
                "max_chordal_error": worst,
                "identity": bool(same_action(mq, IDENTITY) and worst <= 1e-9),
            }
    _emit_json(report, args.out)
    return EXIT_OK


def cmd_orbit(args) -> int:
    m = _resolve_map(args)
    z0 = parse_point(args.start)
    orbit = iterate_orbit(m, z0, args.steps, pole_tol=args.pole_tol)
    if args.format == "json":
        _emit_json(
            {
                "z0": point_to_json(z0),
                "points": [point_to_json(p) for p in orbit.points],
                "termination": orbit.termination.value,
                "pole_step": orbit.pole_step,
                "period": orbit.period,
            },
            args.out,
        )
    else:
        rows = (
            (n, 0.0, 0.0, 1) if p.is_inf else (n, p.z.real, p.z.imag, 0)
            for n, p in enumerate(orbit.points)
        )
        _emit_csv(("n", "re", "im", "is_inf"), rows, args.out)
    if orbit.termination is Termination.POLE_HIT:
        print(f"pole hit: f^{orbit.pole_step}(z0) = inf", file=sys.stderr)
        return EXIT_POLE
    return EXIT_OK


def cmd_geometry(args) -> int:
    m = _resolve_map(args)
    if classify(m) is not MapClass.ELLIPTIC:
        raise CliError(f"{classify(m).value} map unsupported: geometry needs an elliptic map")
    line = invariant_line(m)
    rng = np.random.default_rng(args.seed)
    ts = rng.normal(scale=10.0, size=100)
    line_ok = all(on_line(line, apply(m, s), 1e-8) for s in line.sample(ts))
    report = {
        "line": {
            **line.to_json(),
            "point": _cnum(line.point),
            "direction": _cnum(line.direction),
            "pole": _cnum(-m.d / m.c),
            "image_of_infinity": _cnum(m.a / m.c),
            "invariance_check": {"seed": args.seed, "samples": len(ts), "ok": line_ok},
        },
        "L": separation_L(m),
    }
    if args.r is not None:
        try:
            circle = invariant_circle(m, args.r)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        report["circle"] = circle.to_json()
    _emit_json(report, args.out)
    return EXIT_OK


def _config_from_args(args) -> RunConfig:
    if args.config:
        try:
            obj = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config: {exc}") from None
        return RunConfig.from_json(obj)
    cfg = RunConfig(
        map=args.map or args.preset,
        kind=args.kind,
        eps=args.eps,
        a0=args.a0,
        b0=args.b0,
        steps=args.steps,
        thresholds=args.thresholds,
        r=args.r,
        n_max=args.n_max,
        seed=args.seed,
    )
    cfg.validate()
    return cfg


def run_experiment(cfg: RunConfig):
    """Dispatch a validated config; returns the report."""
    m = load_map(cfg.map)
    if cfg.kind == "drift":
        d0 = parse_point(0 if cfg.a0 is None else cfg.a0)
        if d0.is_inf or d0.z.imag != 0:
            raise CliError("drift start a0 must be real")
        po = build_drift_pseudo_orbit(d0.z.real, cfg.eps)
        b0 = d0 if cfg.b0 is None else parse_point(cfg.b0)
        return drift_experiment(m, po, b0, cfg.steps, cfg.thresholds)

    if classify(m) is not MapClass.ELLIPTIC:
        raise CliError(f"{classify(m).value} map unsupported: {cfg.kind} needs an elliptic map")
    if cfg.kind == "periodic-loop":
        a0 = parse_point(0 if cfg.a0 is None else cfg.a0)
        po = build_periodic_pseudo_orbit(m, a0, cfg.eps, cfg.n_max)
        b0 = a0 if cfg.b0 is None else parse_point(cfg.b0)
        return separation_experiment(m, po, b0, cfg.steps, cfg.thresholds)

    r = DEFAULTS["off_line_r"] if cfg.r is None else cfg.r
    a0 = parse_point(cfg.a0) if cfg.a0 is not None else SpherePoint.finite(invariant_line(m).point)
    po = build_periodic_pseudo_orbit(m, a0, cfg.eps, cfg.n_max)
    b0 = circle_point(m, r) if cfg.b0 is None else parse_point(cfg.b0)
    return off_line_experiment(m, r, po, b0, cfg.steps, cfg.thresholds)


def cmd_experiment(args) -> int:
    cfg = _config_from_args(args)
    try:
        report = run_experiment(cfg)
    except ConstructionError as exc:
        code = EXIT_INCONCLUSIVE if exc.closest_distance is not None else EXIT_INVALID
        raise CliError(f"construction failed: {exc}", code) from None
    except MobiusError as exc:
        raise CliError(str(exc)) from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    report.meta["seed"] = cfg.seed
    if args.format == "csv":
        _emit_csv(("n", "sep"), report.trace_rows(), args.out)
    else:
        _emit_json(report.to_dict(), args.out)
    if report.pole_step is not None:
        print(f"true orbit reached infinity at n = {report.pole_step}", file=sys.stderr)
        return EXIT_POLE
    if any(c is None for c in report.crossings):
        print("some thresholds were not crossed (inconclusive)", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_discrepancy(args) -> int:
    if args.theta is not None and (args.map or args.preset):
        raise CliError("give either --theta or a map, not both")
    if args.map or args.preset:
        m = _resolve_map(args)
        if classify(m) is not MapClass.ELLIPTIC:
            raise CliError("discrepancy of a map needs an elliptic map")
        theta = elliptic_normal_form(m).theta
    else:
        theta = GOLDEN_ANGLE if args.theta is None else args.theta
    n = args.steps
    if n < 1:
        raise CliError("steps must be at least 1")
    _emit_json(
        {
            "theta": theta,
            "n": n,
            "star_discrepancy": star_discrepancy(theta, n),
            "bound_5_log_n_over_n": 5 * math.log(n) / n if n > 1 else None,
        },
        args.out,
    )
    return EXIT_OK


def _thresholds(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"thresholds must be comma-separated numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mobius-stability",
        description="Elliptic Möbius maps: classification, invariant geometry and non-stability experiments.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--map", help="inline JSON literal {\"a\":..,\"b\":..,\"c\":..,\"d\":..} or a JSON file")
    common.add_argument("--preset", choices=sorted(PRESET_COEFFICIENTS), help="named map")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULTS["seed"], help="seed for sampled checks")
    fmt = dict(formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    c = sub.add_parser("classify", parents=[common], help="trace class, fixed points, rotation", **fmt)
    c.add_argument("--tol", type=float, default=DEFAULTS["tol"], help="rationality tolerance (radians)")
    c.add_argument("--q-max", type=int, default=DEFAULTS["q_max"], help="largest denominator tried")
    c.set_defaults(func=cmd_classify)

    o = sub.add_parser("orbit", parents=[common], help="dump an orbit as CSV", **fmt)
    o.add_argument("--start", default="0", help="initial point, e.g. 0, 1+i, inf")
    o.add_argument("--steps", type=int, default=DEFAULTS["orbit_steps"], help="number of map applications")
    o.add_argument("--pole-tol", type=float, default=DEFAULTS["pole_tol"], help="relative pole tolerance")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.set_defaults(func=cmd_orbit)

    g = sub.add_parser("geometry", parents=[common], help="invariant line, L and an invariant circle", **fmt)
    g.add_argument("--r", type=float, default=None, help="circle parameter (r > 0, r != 1)")
    g.set_defaults(func=cmd_geometry)

    e = sub.add_parser("experiment", parents=[common], help="pseudo-orbit separation experiment", **fmt)
    e.add_argument("--config", help="experiment config JSON file (overrides the flags below)")
    e.add_argument("--kind", choices=RunConfig.KINDS, default="periodic-loop")
    e.add_argument("--eps", type=float, default=DEFAULTS["eps"], help="pseudo-orbit defect parameter")
    e.add_argument("--a0", default=None, help="pseudo-orbit start (default 0, or the line midpoint for off-line)")
    e.add_argument("--b0", default=None, help="true orbit start (default a0, or h^-1(r) for off-line)")
    e.add_argument("--steps", type=int, default=DEFAULTS["experiment_steps"])
    e.add_argument("--thresholds", type=_thresholds, default=list(DEFAULTS["thresholds"]), help="comma-separated")
    e.add_argument("--r", type=float, default=None, help=f"off-line circle parameter (default {DEFAULTS['off_line_r']})")
    e.add_argument("--n-max", type=int, default=DEFAULTS["n_max"], help="recurrence search budget")
    e.add_argument("--format", choices=("json", "csv"), default="json")
    e.set_defaults(func=cmd_experiment)

    d = sub.add_parser("discrepancy", parents=[common], help="star discrepancy of a rotation", **fmt)
    d.add_argument("--theta", type=float, default=None, help="rotation angle in radians (default golden)")
    d.add_argument("--steps", type=int, default=DEFAULTS["discrepancy_steps"], help="number of points N")
    d.set_defaults(func=cmd_discrepancy)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (MobiusError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
