import json
import subprocess
import sys

import pytest

from curvedefect.cli import EXIT_ACCEPTANCE, EXIT_CURVE, EXIT_OK, EXIT_USAGE, main
from curvedefect.report import REPORT_KEYS, dumps


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_conic_text(capsys):
    code, out, _ = run(capsys, "analyze", "x^2+y^2+z^2")
    assert code == EXIT_OK
    assert "nearly_free" in out
    assert "nu             1" in out


def test_analyze_json_schema(capsys):
    code, out, _ = run(capsys, "analyze", "x^2+y^2+z^2", "--json", "--no-timing")
    assert code == EXIT_OK
    data = json.loads(out)
    assert tuple(data) == REPORT_KEYS
    assert data["nu"] == "1" and data["classification"] == "nearly_free"
    assert data["n_seq"] == ["1"]
    assert data["timing_ms"] is None
    for check in data["checks"].values():
        assert check["applicable"] in ("yes", "no")
    assert data["checks"]["theorem_1_2"]["verdict"] == "agree"


def test_json_round_trip_is_byte_identical(capsys):
    _, out, _ = run(capsys, "analyze", "--family", "persson", "--m", "4", "--json")
    text = out.rstrip("\n")
    assert dumps(json.loads(text)) == text


def test_rationals_serialize_as_fractions(capsys):
    _, out, _ = run(capsys, "analyze", "--family", "persson", "--m", "4", "--json", "--no-timing")
    d = json.loads(out)["checks"]["theorem_D"]
    assert d["applicable"] == "yes"
    assert d["details"]["alpha"] == "3/4"
    assert d["passed"] is True


def test_determinism_across_runs(capsys):
    argv = ("analyze", "--family", "lines", "--n", "6", "--seed", "3", "--json", "--no-timing")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert json.loads(first)["input"]["params"]["seed"] == "3"


def test_family_ivinskis_k1(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "ivinskis", "--k", "1", "--json", "--no-timing")
    data = json.loads(out)
    assert code == EXIT_OK and data["nu"] == "1" and data["tau"] == "18"
    assert data["checks"]["theorem_C"]["passed"] is True


def test_census_flag_enables_theorem_a(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "rational_nodal", "--d", "4", "--json", "--no-timing")
    a = json.loads(out)["checks"]["theorem_A"]
    assert a["applicable"] == "yes" and a["bound"] == "15/4" and a["passed"] is True


@pytest.mark.parametrize("poly", ["x^2*y", "(x+y+z)^2*z"])
def test_non_reduced_exit_code(capsys, poly):
    code, out, err = run(capsys, "analyze", poly)
    assert code == EXIT_CURVE
    assert "non-reduced or non-isolated singularities" in err
    assert poly in err
    assert out == ""


@pytest.mark.parametrize("argv", [
    ["analyze"],
    ["analyze", "2x"],
    ["analyze", "x^2+y^3"],
    ["analyze", "x^2+y^2+z^2", "--family", "braid"],
    ["analyze", "--family", "persson", "--m", "3"],
    ["analyze", "x^15+y^15+z^15"],
    ["bounds", "A"],
    ["bounds", "nope"],
    ["verify-paper", "--only", "nothing"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err


def test_degree_cap_is_configurable(capsys):
    code, _, _ = run(capsys, "analyze", "x^3+y^3+z^3", "--max-degree", "2", "--quiet")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "analyze", "x^3+y^3+z^3", "--max-degree", "3", "--quiet")
    assert code == EXIT_OK


@pytest.mark.parametrize("argv, expected", [
    (["bounds", "A", "--d", "10"], "nu >= 99/4 => nu >= 25"),
    (["bounds", "C", "--k", "3"], "nu = 55, genus = 55"),
    (["bounds", "dpw", "--d", "8", "--r", "4"], "36"),
    (["bounds", "lct", "--type", "cusp"], "5/6"),
    (["bounds", "genus", "--d", "9", "--census", "triple:6,node:10"], "0"),
])
def test_bounds_text(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert out.strip() == expected


def test_bounds_not_applicable(capsys):
    code, out, _ = run(capsys, "bounds", "D", "--d", "6", "--census", "triple:4,node:3")
    assert code == EXIT_OK
    assert "not applicable" in out
    code, out, _ = run(capsys, "bounds", "B", "--k", "2", "--json")
    assert json.loads(out)["applicable"] == "no"


def test_bounds_json(capsys):
    _, out, _ = run(capsys, "bounds", "A", "--d", "4", "--json")
    data = json.loads(out)
    assert data["bound"] == "15/4" and data["applicable"] == "yes"


def test_verify_only_subset(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "theoremA")
    assert code == EXIT_OK
    lines = [line for line in out.splitlines() if line[:3].strip().rstrip(".").isdigit()]
    assert [line.split()[1] for line in lines] == ["nodal4", "nodal5", "arithmetic"]


def test_verify_max_degree_skips(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "theoremC", "--max-degree", "6", "--json")
    assert code == EXIT_OK
    items = {r["item"]: r["status"] for r in json.loads(out)["items"]}
    assert items == {"sextic": "PASS", "ivinskis2": "SKIPPED", "arithmetic": "PASS"}


def test_verify_properties_alone(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "properties", "--max-degree", "8", "--json")
    items = json.loads(out)["items"]
    assert code == EXIT_OK and [r["item"] for r in items] == ["properties"]
    # conic, Fermat d=2..5, braid, sextic, persson4, nodal4, nodal5
    assert items[0]["measured"] == "10 curves checked"


def test_acceptance_failure_exit_code(capsys, monkeypatch):
    from curvedefect import verification

    def broken(ctx, c):
        c.eq("nu", 0, 1)
    item = verification.Item("broken", "always fails", ("broken",), 0, broken)
    monkeypatch.setattr(verification, "ITEMS", verification.ITEMS + (item,))
    code, out, _ = run(capsys, "verify-paper", "--only", "broken")
    assert code == EXIT_ACCEPTANCE
    assert "FAIL" in out and "expected 1, got 0" in out


def test_jobs_do_not_change_results(capsys):
    _, one, _ = run(capsys, "verify-paper", "--only", "theoremA", "--json")
    _, many, _ = run(capsys, "verify-paper", "--only", "theoremA", "--json", "--jobs", "3")
    strip = lambda s: [(r["item"], r["status"], r["measured"]) for r in json.loads(s)["items"]]
    assert strip(one) == strip(many)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "curvedefect", "bounds", "dpw", "--d", "8", "--r", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "37"
