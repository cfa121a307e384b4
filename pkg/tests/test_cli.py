import csv
import io
import json
import math

import pytest

from mobius_stability.cli import DEFAULTS, main, parse_point, run_experiment, RunConfig, CliError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


def test_classify_q(capsys):
    code, rep, _ = run_json(capsys, "classify", "--preset", "q")
    assert code == 0
    assert rep["class"] == "elliptic"
    assert rep["trace"]["re"] == pytest.approx(-math.sqrt(3), abs=1e-12)
    assert rep["order"] == 6 and rep["rationality"] == "1/6"
    assert rep["order_check"]["identity"] is True
    assert rep["order_check"]["max_chordal_error"] <= 1e-9


def test_classify_golden_is_irrational(capsys):
    code, rep, _ = run_json(capsys, "classify", "--preset", "golden")
    assert code == 0
    assert rep["rationality"] == "irrational" and rep["order"] is None
    assert "order_check" not in rep


def test_classify_literal_and_file(capsys, tmp_path):
    lit = json.dumps({"a": 3, "b": 1, "c": 1, "d": 1})
    code, rep, _ = run_json(capsys, "classify", "--map", lit)
    assert code == 0 and rep["class"] == "hyperbolic"
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"a": {"re": 0, "im": 0}, "b": -1, "c": 1, "d": 0}))
    code, rep, _ = run_json(capsys, "classify", "--map", str(path))
    assert code == 0 and rep["order"] == 2


def test_classify_errors(capsys):
    assert run(capsys, "classify", "--map", '{"a": 2, "b": 1, "c": 0, "d": 0.5}')[0] == 2
    assert run(capsys, "classify", "--map", '{"a": 1, "b": 2, "c": 2, "d": 4}')[0] == 2
    assert run(capsys, "classify", "--map", '{"a": 1, "b": 0, "c": 0, "d": 1, "e": 3}')[0] == 2
    assert run(capsys, "classify", "--map", "no-such-map")[0] == 2
    assert run(capsys, "classify")[0] == 2


def test_orbit_csv(capsys):
    code, out, _ = run(capsys, "orbit", "--preset", "p", "--start", "0", "--steps", "4")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "re", "im", "is_inf"]
    assert {len(r) for r in rows} == {4}
    assert len(rows) == 6
    assert float(rows[2][1]) == pytest.approx(2 / math.sqrt(3))


def test_orbit_pole_exit_code(capsys):
    # -d/c for preset p is sqrt(3)/2
    code, out, err = run(capsys, "orbit", "--preset", "p", "--start", repr(math.sqrt(3) / 2), "--steps", "5")
    assert code == 3
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[-1][3] == "1" and "pole" in err


def test_orbit_json(capsys):
    code, rep, _ = run_json(capsys, "orbit", "--preset", "r", "--start", "1+i", "--steps", "6", "--format", "json")
    assert code == 0
    assert rep["period"] == 3
    assert len(rep["points"]) == 7


def test_geometry(capsys):
    code, rep, _ = run_json(capsys, "geometry", "--preset", "p", "--r", "2")
    assert code == 0
    assert rep["L"] == pytest.approx(0.5)
    assert rep["line"]["invariance_check"]["ok"] is True
    assert rep["circle"]["r"] == 2.0
    assert run(capsys, "geometry", "--preset", "p", "--r", "1")[0] == 2
    assert run(capsys, "geometry", "--map", '{"a": 3, "b": 1, "c": 1, "d": 1}')[0] == 2


def test_experiment_drift_crossing(capsys):
    code, rep, _ = run_json(
        capsys, "experiment", "--preset", "p", "--kind", "drift", "--eps", "1e-2",
        "--steps", "300", "--thresholds", "1",
    )
    assert code == 0
    assert rep["kind"] == "drift"
    assert rep["crossings"] == [{"threshold": 1.0, "n": 101}]


def test_experiment_config_file(capsys, tmp_path):
    cfg = {"map": "golden", "kind": "periodic-loop", "eps": 1e-2, "a0": 0, "b0": 0, "steps": 20000, "thresholds": [1.0]}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    code, rep, _ = run_json(capsys, "experiment", "--config", str(path))
    assert code == 0
    assert rep["period"] == 2584
    assert rep["defect"] <= 5e-3
    assert rep["crossings"][0]["n"] is not None


def test_experiment_config_rejects_unknown_keys(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"map": "golden", "epsilon": 1e-3}))
    code, _, err = run(capsys, "experiment", "--config", str(path))
    assert code == 2 and "epsilon" in err
    with pytest.raises(CliError):
        RunConfig.from_json({"map": "golden", "kind": "spiral"})


def test_experiment_rational_map_periodic_loop_is_invalid(capsys):
    assert run(capsys, "experiment", "--preset", "p", "--kind", "periodic-loop")[0] == 2


def test_experiment_search_exhausted(capsys):
    code, _, err = run(capsys, "experiment", "--preset", "golden", "--eps", "1e-9", "--n-max", "100")
    assert code == 4 and "closest" in err


def test_experiment_uncrossed_threshold_is_inconclusive(capsys):
    code, rep, _ = run_json(
        capsys, "experiment", "--preset", "golden", "--eps", "1e-2", "--steps", "100", "--thresholds", "1",
    )
    assert code == 4
    assert rep["crossings"] == [{"threshold": 1.0, "n": None}]


def test_experiment_pole(capsys):
    code, _, _ = run(capsys, "experiment", "--preset", "p", "--kind", "drift", "--a0", "0", "--b0", repr(math.sqrt(3) / 2))
    assert code == 3


def test_experiment_off_line(capsys):
    code, rep, _ = run_json(capsys, "experiment", "--preset", "golden", "--kind", "off-line", "--steps", "1000", "--thresholds", "")
    assert code == 0
    assert rep["kind"] == "off-line"
    assert rep["count_ge_L"] >= 1


def test_experiment_csv(capsys):
    code, out, _ = run(capsys, "experiment", "--preset", "q", "--kind", "drift", "--a0", "0.25", "--steps", "50", "--thresholds", "", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "sep"] and len(rows) == 52
    assert {len(r) for r in rows} == {2}


def test_experiment_deterministic(capsys):
    argv = ("experiment", "--preset", "golden", "--eps", "1e-2", "--steps", "5000", "--thresholds", "1")
    _, first, _ = run_json(capsys, *argv)
    _, second, _ = run_json(capsys, *argv)
    first.pop("meta"), second.pop("meta")
    assert json.dumps(first) == json.dumps(second)


def test_report_json_round_trip():
    cfg = RunConfig(map="golden", eps=1e-2, steps=3000, thresholds=[1.0])
    cfg.validate()
    d = run_experiment(cfg).to_dict()
    assert json.loads(json.dumps(d)) == d


def test_discrepancy(capsys):
    code, rep, _ = run_json(capsys, "discrepancy", "--steps", "10000")
    assert code == 0
    assert rep["star_discrepancy"] <= rep["bound_5_log_n_over_n"]
    code, rep, _ = run_json(capsys, "discrepancy", "--preset", "p", "--steps", "10")
    assert code == 0 and rep["star_discrepancy"] == pytest.approx(0.5)
    assert run(capsys, "discrepancy", "--steps", "0")[0] == 2


def test_parse_point():
    assert parse_point("1+i").z == 1 + 1j
    assert parse_point("-i").z == -1j
    assert parse_point("inf").is_inf
    assert parse_point('{"re": 1, "im": 2}').z == 1 + 2j
    with pytest.raises(CliError):
        parse_point("banana")


def test_argparse_rejects_bad_flags(capsys):
    with pytest.raises(SystemExit) as info:
        main(["orbit", "--steps", "many"])
    assert info.value.code == 2


def test_defaults_are_documented():
    from pathlib import Path

    text = (Path(__file__).parent.parent / "docs" / "cli.md").read_text()
    for key in ("experiment_steps", "eps", "thresholds", "n_max"):
        assert repr(DEFAULTS[key]) in text or str(DEFAULTS[key]) in text
