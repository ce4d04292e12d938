import itertools
import math

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from curvedefect import families as fam
from curvedefect.forms import parse_form
from curvedefect.jacobian import (
    JacobianProfile,
    NonReducedError,
    ar_dim,
    ceil_three_quarters_square,
    classify,
    jacobian_module_dims,
    jacobian_piece,
    mdr,
    milnor_dim,
    predicted_defect,
    profile,
    saturate,
    tau,
    theorem12_crosscheck,
)

X, Y, Z = sympy.symbols("x y z")
CONIC = "x^2+y^2+z^2"
BRAID = "x*y*z*(x-y)*(x-z)*(y-z)"


def oracle_jacobian_dim(text: str, j: int) -> int:
    """dim J_j from sympy expansion and sympy rank."""
    f = sympy.sympify(text.replace("^", "**"))
    d = sympy.Poly(f, X, Y, Z).total_degree()
    k = j - d + 1
    if k < 0:
        return 0
    monos = [X ** a * Y ** b * Z ** (k - a - b) for a in range(k + 1) for b in range(k + 1 - a)]
    target = [(a, b, j - a - b) for a in range(j + 1) for b in range(j + 1 - a)]
    rows = []
    for g in (sympy.diff(f, v) for v in (X, Y, Z)):
        for m in monos:
            p = sympy.Poly(sympy.expand(m * g), X, Y, Z)
            coeffs = dict(p.terms())
            rows.append([coeffs.get(t, 0) for t in target])
    return sympy.Matrix(rows).rank() if rows else 0


def series_coefficients(d: int) -> list[int]:
    """Coefficients of ((1 - t^(d-1)) / (1 - t))^3 by direct multiplication."""
    base = [1] * (d - 1)
    out = [1]
    for _ in range(3):
        nxt = [0] * (len(out) + len(base) - 1)
        for i, a in enumerate(out):
            for k, b in enumerate(base):
                nxt[i + k] += a * b
        out = nxt
    return out


def test_jacobian_piece_examples():
    conic = parse_form(CONIC)
    assert jacobian_piece(conic, 1).dim == 3
    assert jacobian_piece(conic, 0).dim == 0
    quartic = parse_form("x^4+y^4+z^4")
    J3 = jacobian_piece(quartic, 3, field="rational")
    assert J3.dim == 3
    assert {str(g) for g in J3.forms()} == {"x^3", "y^3", "z^3"}


@pytest.mark.parametrize("text", [CONIC, "x^3+y^3+z^3", BRAID, "y^2*z - x^3 - x^2*z", "x*y*(x+y+z)*(x-2*y+3*z)"])
def test_jacobian_dims_against_sympy(text):
    f = parse_form(text)
    for j in range(0, min(3 * (f.degree - 2) + 3, f.degree + 4)):
        assert jacobian_piece(f, j).dim == oracle_jacobian_dim(text, j), j


def test_ar_dim_examples():
    conic = parse_form(CONIC)
    assert ar_dim(conic, 0) == 0
    assert ar_dim(conic, 1) == 3
    assert ar_dim(parse_form("x^4+y^4+z^4"), 2) == 0


@pytest.mark.parametrize("text, expected", [(CONIC, 1), (BRAID, 2)])
def test_mdr_examples(text, expected):
    assert mdr(parse_form(text)) == expected


@pytest.mark.parametrize("d", range(2, 7))
def test_smooth_fermat_mdr_is_d_minus_1(d):
    assert mdr(fam.fermat(d).form) == d - 1


def test_milnor_examples():
    conic = parse_form(CONIC)
    assert milnor_dim(conic, 0) == 1
    assert milnor_dim(conic, 1) == 0
    cubic = parse_form("x^3+y^3+z^3")
    assert [milnor_dim(cubic, j) for j in range(5)] == [1, 3, 3, 1, 0]


@pytest.mark.parametrize("d", range(2, 7))
def test_milnor_series_of_fermat(d):
    f = fam.fermat(d).form
    series = series_coefficients(d)
    for j, c in enumerate(series):
        assert milnor_dim(f, j) == c


def test_tau_examples():
    for d in (2, 3, 4, 5):
        assert tau(fam.fermat(d).form) == 0
    braid = fam.braid_arrangement()
    assert tau(braid.form) == 19 == braid.expected_census.tau
    assert tau(fam.dual_fermat_sextic().form) == 18


@pytest.mark.parametrize("text", ["x^2*y", "(x+y+z)^2*z", "x^2*(y^2 + z^2)"])
def test_non_reduced_is_refused(text):
    with pytest.raises(NonReducedError, match="non-reduced or non-isolated"):
        tau(parse_form(text))


def test_saturation_examples():
    conic = parse_form(CONIC)
    for I in saturate(conic):
        assert I.dim == I.ambient_dim
    sextic = fam.dual_fermat_sextic().form
    sat = saturate(sextic)
    assert len(sat) == 3 * 4 + 2
    assert sat[2].dim == 0
    # S/I is the coordinate ring of the Tjurina scheme (length 18, two per cusp),
    # so its Hilbert function is min(dim S_j, 18) here and no cubic lies in I
    hilbert = [I.ambient_dim - I.dim for I in sat]
    assert hilbert == [min((j + 1) * (j + 2) // 2, 18) for j in range(len(sat))]
    assert sat[3].dim == 0
    assert sat[-1].dim == jacobian_piece(sextic, 13).dim


def test_saturation_over_q_matches_modular():
    sextic = fam.dual_fermat_sextic().form
    q = [s.dim for s in saturate(sextic, field="rational")]
    p = [s.dim for s in saturate(sextic)]
    assert q == p


def test_jacobian_module_examples():
    assert jacobian_module_dims(parse_form(CONIC)) == (1,)
    assert set(jacobian_module_dims(parse_form(BRAID))) == {0}
    assert jacobian_module_dims(parse_form("x^4+y^4+z^4")) == (1, 3, 6, 7, 6, 3, 1)


@pytest.mark.parametrize("name, d, tau_, nu", [
    ("sextic", 6, 18, 1),
    ("persson4", 8, 36, 1),
])
def test_profile_examples(name, d, tau_, nu):
    inst = fam.dual_fermat_sextic() if name == "sextic" else fam.persson(4)
    p = profile(inst.form)
    assert (p.d, p.tau, p.nu, p.classification) == (d, tau_, nu, "nearly_free")


@pytest.mark.slow
def test_profile_ivinskis_two():
    p = profile(fam.ivinskis(2).form)
    assert (p.d, p.tau, p.nu) == (12, 72, 19)


@pytest.mark.parametrize("text", [CONIC, "x^3+y^3+z^3", BRAID, "y^2*z-x^3-x^2*z", "x*y*z", "x"])
def test_rational_and_modular_routes_agree(text):
    f = parse_form(text)
    q, p = profile(f, field="rational"), profile(f)
    assert (q.mdr, q.tau, q.n_seq, q.milnor_seq) == (p.mdr, p.tau, p.n_seq, p.milnor_seq)
    assert q.field == "Q"


def test_line_convention():
    p = profile(parse_form("x+2*y"))
    assert (p.tau, p.nu, p.classification, p.n_seq) == (0, 0, "free", ())


def test_profile_invariants():
    for text in (CONIC, BRAID, "x^3+y^3+z^3", "x^2*z-y^3+y^2*z"):
        p = profile(parse_form(text))
        assert p.nu == max(p.n_seq, default=0)
        assert p.classification == classify(p.nu)
        assert p.mdr <= p.d - 1
        assert p.containment
        assert p.is_self_dual()


def test_classification_labels():
    assert classify(0) == "free"
    assert classify(1) == "nearly_free"
    assert classify(4) == "defect(4)"


def test_crosscheck_examples():
    assert theorem12_crosscheck(profile(parse_form(CONIC))).predicted == 1
    c = theorem12_crosscheck(profile(parse_form("x^4+y^4+z^4")))
    assert c.predicted == 7 == c.measured and c.verdict == "agree"
    small, large = predicted_defect(8, 3, 5)
    assert small == large == 37 - 5


def test_smooth_coherence():
    # smooth curves have tau = 0 and nu equal to the largest Milnor coefficient
    for d in range(2, 7):
        p = profile(fam.fermat(d).form)
        assert p.tau == 0
        assert p.nu == max(series_coefficients(d))


def test_free_curve_first_case():
    p = profile(parse_form(BRAID))
    assert p.nu == 0
    assert p.tau == (p.d - 1) ** 2 - p.mdr * (p.d - 1 - p.mdr)


@given(st.integers(2, 50))
def test_case_overlap(d):
    for r in range(d):
        if (d - 2) / 2 <= r < (d - 1) / 2:
            assert (d - 1) ** 2 - r * (d - 1 - r) == math.ceil(3 * (d - 1) ** 2 / 4)
            assert ceil_three_quarters_square(d) == math.ceil(sympy.Rational(3 * (d - 1) ** 2, 4))


def test_profile_is_deterministic_and_frozen():
    f = parse_form(BRAID)
    a, b = profile(f), profile(f, parallel=False)
    assert a == b
    with pytest.raises(AttributeError):
        a.tau = 3  # type: ignore[misc]
    assert isinstance(a, JacobianProfile)


def test_nonsymmetric_check_is_live():
    # three concurrent lines: the Jacobian module should still be symmetric
    p = profile(parse_form("x*y*(x+y)"))
    assert p.tau == 4
    assert all(p.n_seq[j] == p.n_seq[len(p.n_seq) - 1 - j] for j in range(len(p.n_seq)))


def test_small_arrangements_against_counts():
    for n, seed in itertools.product((3, 4, 5), (0, 1)):
        inst = fam.generic_lines(n, seed=seed)
        assert tau(inst.form) == n * (n - 1) // 2
