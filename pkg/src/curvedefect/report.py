"""Curve reports: run the pipeline and every applicable check on one curve."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import singularities as sing
from .families import FamilyInstance
from .forms import Form
from .jacobian import JacobianProfile, profile, theorem12_crosscheck

REPORT_KEYS = ("input", "d", "mdr", "tau", "n_seq", "nu", "classification", "checks", "timing_ms")


def encode(value: Any) -> Any:
    """JSON-ready value: integers as decimal strings, rationals as "p/q"."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    return str(value)


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, ensure_ascii=True)


def verdict_dict(v: sing.Verdict) -> dict:
    out = {"applicable": "yes" if v.applicable else "no"}
    if not v.applicable:
        out["reason"] = v.reason
        return out
    out["bound"] = v.bound
    out["relation"] = v.relation
    out["measured"] = v.measured
    out["passed"] = v.passed
    if v.details:
        out["details"] = v.details
    return out


@dataclass
class CurveReport:
    input: dict
    profile: JacobianProfile
    checks: dict
    timing_ms: float | None = None

    @property
    def nu(self) -> int:
        return self.profile.nu

    def all_passed(self) -> bool:
        """Every applicable check that produced a verdict passed."""
        for c in self.checks.values():
            if c.get("applicable") == "yes" and c.get("passed") is False:
                return False
        return True

    def to_dict(self) -> dict:
        p = self.profile
        raw = {
            "input": self.input,
            "d": p.d,
            "mdr": p.mdr,
            "tau": p.tau,
            "n_seq": list(p.n_seq),
            "nu": p.nu,
            "classification": p.classification,
            "checks": self.checks,
            "timing_ms": None if self.timing_ms is None else round(self.timing_ms),
        }
        return {k: encode(raw[k]) for k in REPORT_KEYS}

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_text(self) -> str:
        p = self.profile
        src = self.input.get("polynomial") or self.input.get("family")
        lines = [
            f"curve          {src}",
            f"degree         {p.d}",
            f"mdr            {p.mdr}",
            f"tau            {p.tau}",
            f"n(f)_j         {' '.join(map(str, p.n_seq)) or '-'}",
            f"nu             {p.nu}",
            f"classification {p.classification}",
            f"field          {p.field}",
        ]
        for name, c in self.checks.items():
            if c.get("applicable") == "no":
                lines.append(f"  {name:<14} not applicable: {c.get('reason', '')}")
                continue
            status = {True: "PASS", False: "FAIL", None: "-"}[c.get("passed")]
            if "bound" not in c:
                lines.append(f"  {name:<14} {status}")
                continue
            bound = c["bound"]
            if isinstance(bound, Fraction) and bound.denominator == 1:
                bound = bound.numerator
            lines.append(f"  {name:<14} {status}  measured {c.get('measured')} {c.get('relation', '')} {bound}")
        if self.timing_ms is not None:
            lines.append(f"time           {self.timing_ms:.0f} ms")
        return "\n".join(lines)


def _theorem_b_k(d: int, census: sing.Census | None) -> int | None:
    if census is None or d % 3:
        return None
    k = d // 3
    if census.types() - {sing.ORDINARY_TRIPLE, sing.NODE}:
        return None
    nodes = (9 * k * k - 21 * k + 2) // 2
    if census.get(sing.ORDINARY_TRIPLE) == 2 * k and census.get(sing.NODE) == nodes:
        return k
    return None


def build_checks(p: JacobianProfile, census: sing.Census | None = None,
                 irreducible: bool | None = None, expected: dict | None = None) -> dict:
    checks: dict[str, dict] = {}

    cc = theorem12_crosscheck(p)
    checks["theorem_1_2"] = {
        "applicable": "yes",
        "cases": list(cc.cases),
        "bound": cc.predicted,
        "relation": "==",
        "measured": cc.measured,
        "passed": cc.agree,
        "verdict": cc.verdict,
    }
    checks["dpw"] = verdict_dict(sing.dpw_check(p.d, p.mdr, p.tau))
    T = p.socle_degree
    checks["duality"] = {
        "applicable": "yes" if T >= 0 else "no",
        **({"passed": p.is_self_dual(), "center": Fraction(T, 2)} if T >= 0 else {"reason": "degree 1"}),
    }
    checks["containment"] = {"applicable": "yes", "passed": p.containment}

    checks["theorem_A"] = verdict_dict(sing.theorem_a(p.d, p.nu, census, irreducible) if census is not None
                                       else sing.not_applicable("A", "no singularity census supplied"))
    k_b = _theorem_b_k(p.d, census) if irreducible else None
    checks["theorem_B"] = verdict_dict(
        sing.theorem_b(k_b, p.nu) if k_b is not None
        else sing.not_applicable("B", "census is not 2k triple points plus genus-zero nodes")
    )
    k_c = sing.theorem_c_applies(p.d, census)
    checks["theorem_C"] = verdict_dict(
        sing.theorem_c(k_c, p.nu) if k_c is not None
        else sing.not_applicable("C", "census is not 9k^2 cusps in degree 6k")
    )
    checks["theorem_D"] = verdict_dict(sing.theorem_d(p.d, census, p.nu, p.mdr, p.tau))

    if census is not None:
        checks["census_tau"] = {"applicable": "yes", "bound": census.tau, "relation": "==",
                                "measured": p.tau, "passed": census.tau == p.tau}
        if census:
            alpha = sing.arnold_exponent(census)
            lower = sing.mdr_lower_bound(alpha, p.d) if alpha <= 1 else None
            if lower is not None:
                checks["dimca_sernesi"] = {
                    "applicable": "yes", "alpha": alpha,
                    "raw_bound": sing.mdr_lower_bound_value(alpha, p.d),
                    "bound": lower, "relation": ">=", "measured": p.mdr, "passed": p.mdr >= lower,
                }
    if expected:
        measured = {"tau": p.tau, "nu": p.nu, "mdr": p.mdr}
        for key, value in expected.items():
            if key == "mdr_lower_bound":
                checks["expected_mdr"] = {"applicable": "yes", "bound": value, "relation": ">=",
                                          "measured": p.mdr, "passed": p.mdr >= value}
            elif key in measured:
                checks[f"expected_{key}"] = {"applicable": "yes", "bound": value, "relation": "==",
                                             "measured": measured[key], "passed": measured[key] == value}
    return checks


def analyze(form: Form | None = None, instance: FamilyInstance | None = None,
            census: sing.Census | None = None, irreducible: bool | None = None,
            input_echo: dict | None = None, field=None, timing: bool = True,
            prof: JacobianProfile | None = None) -> CurveReport:
    """Run the pipeline and all checks on a form or a family instance."""
    if instance is not None:
        form = instance.form
        census = instance.expected_census if census is None else census
        irreducible = instance.irreducible if irreducible is None else irreducible
        expected = instance.expected
        echo = {"family": instance.name, "params": dict(instance.params), "polynomial": None}
    else:
        expected = None
        echo = {"family": None, "params": {}, "polynomial": form.render()}
    if input_echo:
        echo.update(input_echo)
    start = time.perf_counter()
    p = prof if prof is not None else profile(form, field=field)
    elapsed = (time.perf_counter() - start) * 1000
    checks = build_checks(p, census, irreducible, expected)
    return CurveReport(echo, p, checks, elapsed if timing else None)
