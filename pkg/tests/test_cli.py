"""CLI surface: file formats, reports, determinism, exit codes."""

import json
from pathlib import Path

import pytest

from polycenters.cli import main
from polycenters.groebner import IdealBasis, buchberger, ideal_equal
from polycenters.parampoly import MonomialOrder, parse_poly

TRIG1 = {
    "label": "trig degree 1",
    "degree": 4,
    "omega": {"pi_multiple": "2"},
    "coeffs": {
        "4": "1",
        "3": "trig: c*cos(t) + d*sin(t)",
        "2": "trig: a*cos(t) + b*sin(t)",
    },
    "params": [{"name": "a"}, {"name": "b"}, {"name": "c"}, {"name": "d"}],
    "var_order": ["a", "b", "c", "d"],
}

BARE = {
    "degree": 4,
    "omega": {"rational": "1"},
    "coeffs": {"4": "1"},
    "params": [],
}


def _write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload, indent=1))
    return str(p)


def test_mu_max_report_and_determinism(tmp_path, capsys):
    path = _write(tmp_path, "trig1.json", TRIG1)
    out = str(tmp_path / "reports")
    argv = ["--out", out, "analyze", "mu-max", path, "--cap", "9"]
    assert main(argv) == 0
    first = (tmp_path / "reports" / "trig1.mu-max.json").read_bytes()
    assert main(argv) == 0
    second = (tmp_path / "reports" / "trig1.mu-max.json").read_bytes()
    assert first == second, "reports must be byte-identical on repeated runs"
    report = json.loads(first)
    assert report["mu_max_complex"] == 7
    assert report["real"]["mu_max_real"] == 6
    assert report["numeric_crosscheck"]["verdict"] == "agree"
    # the report is self-certifying: recompute the verdict from its bases
    levels = report["levels"]
    final = levels[-1]["basis"]
    assert final["is_unit"]
    order = MonomialOrder(final["order"]["kind"], tuple(final["order"]["variables"]))
    prev = levels[-2]["basis"]
    basis = IdealBasis(tuple(parse_poly(s) for s in prev["generators"]), order)
    recomputed = buchberger(basis.generators, order, postcheck=False)
    assert ideal_equal(basis, recomputed)
    assert not recomputed.is_unit


def test_eta_command(tmp_path):
    path = _write(tmp_path, "trig1.json", TRIG1)
    out = str(tmp_path / "reports")
    assert main(["--out", out, "analyze", "eta", path, "--n", "6"]) == 0
    report = json.loads((tmp_path / "reports" / "trig1.eta.json").read_text())
    rows = {r["n"]: r for r in report["eta"]}
    assert rows[4]["eta"] == "b*c-a*d-2"
    assert rows[5]["kind"] == "zero"
    assert rows[6]["eta"] == "a^2+b^2"


def test_groebner_command(tmp_path):
    path = _write(tmp_path, "ideal.json", {
        "variables": ["x", "y"], "order": "lex",
        "generators": ["x^2-1", "x*y-1"],
    })
    out = str(tmp_path / "reports")
    assert main(["--out", out, "groebner", path]) == 0
    report = json.loads((tmp_path / "reports" / "ideal.groebner.json").read_text())
    assert set(report["basis"]["generators"]) == {"x-y", "y^2-1"}
    assert not report["basis"]["is_unit"]


def test_groebner_budget_exit_code(tmp_path):
    path = _write(tmp_path, "ideal.json", {
        "variables": ["x", "y"], "order": "grevlex",
        "generators": ["x^3-2*x*y", "x^2*y-2*y^2+x"],
    })
    out = str(tmp_path / "reports")
    assert main(["--out", out, "groebner", path, "--max-pairs", "1"]) == 2


def test_center_check_two_term(tmp_path):
    eq = {
        "degree": 4,
        "omega": {"pi_multiple": "2"},
        "coeffs": {"4": "1", "2": "trig: cos(t) + 1"},
        "params": [],
    }
    path = _write(tmp_path, "twoterm.json", eq)
    out = str(tmp_path / "reports")
    assert main(["--out", out, "center-check", path]) == 0
    report = json.loads((tmp_path / "reports" / "twoterm.center-check.json").read_text())
    assert report["aggregate"]["status"] == "not-center"
    names = {v["criterion"] for v in report["verdicts"]}
    assert "two-term" in names and "obstruction-sequence" in names
    assert report["consistent"]
    # int B = 2 pi: the obstruction sequence pins multiplicity 2
    assert report["aggregate"]["multiplicity"] == 2
    assert report["numeric"]["estimate"] == 2


def test_verify_command_with_csv(tmp_path):
    path = _write(tmp_path, "bare.json", BARE)
    out = str(tmp_path / "reports")
    csv_path = str(tmp_path / "samples.csv")
    assert main(["--out", out, "verify", path, "--rho", "1e-2",
                 "--samples", "64", "--csv", csv_path]) == 0
    report = json.loads((tmp_path / "reports" / "bare.verify.json").read_text())
    assert report["multiplicity_estimate"] == 4
    assert report["verify_center"]["returned"] is False
    lines = Path(csv_path).read_text().strip().splitlines()
    assert len(lines) == 65  # header + one row per sample


def test_reproduce_command(tmp_path):
    out = str(tmp_path / "reports")
    assert main(["--out", out, "reproduce", "prop"]) == 0
    report = json.loads((tmp_path / "reports" / "reproduce-prop.reproduce.json").read_text())
    assert report["ok"] is True
    assert all(r["status"] == "PASS" for r in report["rows"])


def test_unknown_reproduce_target_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["reproduce", "nonsense"])


def test_classdef_json_round_trip(tmp_path):
    # the documented file schema reproduces the built-in class verdicts
    from polycenters.classes import trig_degree2_class
    from polycenters.cli import load_equation, _order_for
    from polycenters.multiplicity import mu_max_loop

    cdef = trig_degree2_class()
    path = _write(tmp_path, "roundtrip.json", cdef.to_json())
    eq, extras = load_equation(path)
    assert tuple(extras["eliminate"]) == cdef.eliminate
    order = _order_for(eq, extras)
    rep = mu_max_loop(eq, nmax_cap=9, order=order, eliminate=extras["eliminate"])
    assert rep.mu_max_complex == cdef.expected_mu_complex
    assert rep.mu_max_real == cdef.expected_mu_real


def test_malformed_input_exits_cleanly(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"degree": 4}')
    assert main(["--out", str(tmp_path), "analyze", "mu-max", str(bad)]) == 1
    missing = str(tmp_path / "nope.json")
    assert main(["--out", str(tmp_path), "verify", missing]) == 1
