import json
import math
from fractions import Fraction

from curvedefect import families as fam
from curvedefect import singularities as sing
from curvedefect.forms import parse_form
from curvedefect.report import REPORT_KEYS, analyze, build_checks, encode
from curvedefect.jacobian import profile


def test_encode_rules():
    assert encode(12) == "12"
    assert encode(2 ** 70) == str(2 ** 70)
    assert encode(Fraction(3, 4)) == "3/4"
    assert encode(Fraction(2)) == "2/1"
    assert encode(True) is True and encode(None) is None
    assert encode(math.inf) == "inf"
    assert encode({"a": [1, Fraction(1, 2)]}) == {"a": ["1", "1/2"]}


def test_report_is_self_consistent():
    r = analyze(instance=fam.braid_arrangement(), timing=False)
    d = r.to_dict()
    assert tuple(d) == REPORT_KEYS
    assert int(d["nu"]) == max(int(x) for x in d["n_seq"])
    assert d["classification"] == "free"
    assert d["checks"]["theorem_D"]["applicable"] == "no"
    assert d["checks"]["census_tau"]["passed"] is True
    assert r.all_passed()
    assert json.loads(r.to_json()) == d


def test_checks_for_a_family_instance():
    inst = fam.dual_fermat_sextic()
    checks = build_checks(profile(inst.form), inst.expected_census, True, inst.expected)
    assert checks["theorem_C"]["passed"] is True
    assert checks["dimca_sernesi"]["bound"] == 3
    assert checks["dimca_sernesi"]["alpha"] == Fraction(5, 6)
    assert checks["expected_mdr"]["passed"] is True
    assert checks["dpw"]["bound"] == sing.dpw_tau_max(6, 3)


def test_failed_expectation_is_reported():
    p = profile(parse_form("x^2+y^2+z^2"))
    checks = build_checks(p, expected={"nu": 2})
    assert checks["expected_nu"]["passed"] is False


def test_text_report_lines():
    text = analyze(form=parse_form("x^2+y^2+z^2"), timing=False).to_text()
    assert "classification nearly_free" in text
    assert "duality        PASS" in text
    assert "None" not in text
