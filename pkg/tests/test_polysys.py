import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tik import polysys
from tik.errors import CapExceeded, InputError, UnsupportedError
from tik.field import FieldSpec
from tik.groups import GroupSpec, sample
from tik.oracle import brute_force_isomorphic
from tik.tensor import ActionKind, DWayArray, apply_five_action

F2, F5, F7 = FieldSpec.Fp(2), FieldSpec.Fp(5), FieldSpec.Fp(7)
P = FieldSpec.Fp(32771)


def _one(F, v):
    return DWayArray(F, F.array(np.full((1, 1, 1), v, dtype=np.int64)))


def test_frozen_scalar_system():
    # x y z . 1 = 2 over F_5, by hand
    S = polysys.emit_ti_system(_one(F5, 1), _one(F5, 2))
    assert polysys.render(S) == (
        "field p=5\n"
        "vars X_0_0,x,Y_0_0,y,Z_0_0,z\n"
        "1*X_0_0*Y_0_0*Z_0_0 + 3\n"
        "1*X_0_0*x + 4\n"
        "1*Y_0_0*y + 4\n"
        "1*Z_0_0*z + 4\n")


def test_frozen_quadratic_with_orthogonality():
    S = polysys.emit_ti_system(_one(F5, 1), _one(F5, 2), "quadratic", ["invertibility", "orthogonality"])
    lines = polysys.render(S).splitlines()
    assert lines[2] == "1*X_0_0*Y_0_0 + 3*Z_0_0"
    assert "1*X_0_0^2 + 4" in lines


def test_counts_at_n2():
    A = DWayArray.random(F7, (2, 2, 2), np.random.default_rng(0))
    S = polysys.emit_ti_system(A, A)
    assert len(S.variables) == 15
    assert len(S.equations) == 8 + 3
    assert S.degrees().count(3) >= 8


@pytest.mark.parametrize("n", [2, 3])
def test_orthogonality_equation_count(n):
    A = DWayArray.random(F7, (n, n, n), np.random.default_rng(n))
    base = len(polysys.emit_ti_system(A, A, constraints=[]).equations)
    ortho = len(polysys.emit_ti_system(A, A, constraints=["orthogonality"]).equations)
    assert ortho - base == 3 * n * (n + 1) // 2


@pytest.mark.parametrize("F", [F7, P], ids=str)
@pytest.mark.parametrize("variant", ["cubic", "quadratic"])
@given(seed=st.integers(0, 10**6))
def test_planted_ti_satisfies(F, variant, seed):
    rng = np.random.default_rng(seed)
    A = DWayArray.random(F, (2, 2, 2), rng)
    g = [sample(GroupSpec("GL", 2, F), seed + i) for i in range(3)]
    B = apply_five_action(ActionKind.UVW, g, A)
    S = polysys.emit_ti_system(A, B, variant, ["invertibility", "inverse"])
    mats = dict(zip("XYZ", g if variant == "cubic" else g[:2] + [F.inv(g[2])]))
    assert polysys.check_assignment(S, polysys.assignment_from_matrices(S, mats))


def test_planted_orthogonal_ti():
    F = FieldSpec.Fp(3)
    A = DWayArray.random(F, (2, 2, 2), np.random.default_rng(3))
    g = [sample(GroupSpec("O", 2, F), 5 + i) for i in range(3)]
    B = apply_five_action(ActionKind.UVW, g, A)
    S = polysys.emit_ti_system(A, B, "cubic", ["invertibility", "orthogonality"])
    assert polysys.check_assignment(S, polysys.assignment_from_matrices(S, dict(zip("XYZ", g))))


def test_wrong_assignment_reports_violations():
    A = DWayArray.random(F7, (2, 2, 2), np.random.default_rng(4))
    g = [sample(GroupSpec("GL", 2, F7), i) for i in range(3)]
    B = apply_five_action(ActionKind.UVW, g, A)
    S = polysys.emit_ti_system(A, B)
    bad = polysys.assignment_from_matrices(S, {"X": F7.eye(2), "Y": F7.eye(2), "Z": F7.eye(2)})
    assert A != B
    res = polysys.check_assignment(S, bad)
    assert not res
    assert res.violated is not None and res.violated < 8   # a matching equation fails first


@pytest.mark.parametrize("F", [F7, P], ids=str)
@pytest.mark.parametrize("group", ["GL", "O"])
def test_planted_atfe(F, group):
    n = 4
    rng = np.random.default_rng(5)
    phi = polysys.alt_form_from_coeffs(F, n, [int(x) for x in rng.integers(0, F.p, 4)])
    assert polysys.is_alternating(phi)
    M = sample(GroupSpec(group, n, F), 6)
    psi = apply_five_action(ActionKind.UUU, [M], phi)
    S = polysys.emit_atfe_system(phi, psi, group)
    assert polysys.check_assignment(S, polysys.assignment_from_matrices(S, {"A": M.T}))


def test_alt_form_coeffs_roundtrip():
    phi = polysys.alt_form_from_coeffs(F7, 4, [1, 2, 3, 4])
    assert polysys.alt_form_coeffs(phi) == [1, 2, 3, 4]
    with pytest.raises(InputError):
        polysys.emit_atfe_system(DWayArray.random(F7, (3, 3, 3), np.random.default_rng(0)), phi)


@pytest.mark.parametrize("F", [F5, FieldSpec.Q()], ids=str)
def test_generic_roundtrip(F):
    A = DWayArray.random(F, (2, 2, 1), np.random.default_rng(6))
    B = DWayArray.random(F, (2, 2, 1), np.random.default_rng(7))
    for variant in ("cubic", "quadratic"):
        S = polysys.emit_ti_system(A, B, variant, ["invertibility", "inverse"])
        text = polysys.render(S)
        assert polysys.parse_generic(text) == S
        assert polysys.render(polysys.parse_generic(text)) == text


def test_magma_template():
    S = polysys.emit_ti_system(_one(F5, 1), _one(F5, 2))
    text = polysys.render(S, "magma")
    assert "GF(5)" in text and "grevlex" in text and "GroebnerBasis" in text


def test_float_fields_refused():
    R = FieldSpec.R()
    with pytest.raises(UnsupportedError):
        polysys.emit_ti_system(_one(R, 1.0), _one(R, 1.0))


def test_solve_tiny_agrees_with_oracle():
    arrays = [DWayArray(F2, np.array(bits, dtype=np.int64).reshape(2, 2, 2))
              for bits in itertools.product((0, 1), repeat=8)][::9]
    gs = [GroupSpec("GL", 2, F2)] * 3
    for A, B in itertools.combinations_with_replacement(arrays, 2):
        S = polysys.emit_ti_system(A, B)
        sol = polysys.solve_tiny(S)
        assert (sol is None) == (brute_force_isomorphic(ActionKind.UVW, gs, A, B) is None)
        if sol is not None:
            assert polysys.check_assignment(S, sol)


def test_solve_tiny_limits():
    A = DWayArray.random(F7, (2, 2, 2), np.random.default_rng(0))
    with pytest.raises(CapExceeded):
        polysys.solve_tiny(polysys.emit_ti_system(A, A), cap=1000)
    Q = FieldSpec.Q()
    with pytest.raises(UnsupportedError):
        polysys.solve_tiny(polysys.emit_ti_system(_one(Q, 1), _one(Q, 1)))


def test_det_poly_matches_det():
    rng = np.random.default_rng(8)
    vals = [int(v) for v in rng.integers(0, 7, 9)]
    D = polysys.det_poly(F7, [[3 * i + j for j in range(3)] for i in range(3)])
    assert polysys.evaluate(F7, D, vals) == F7.det(F7.array(np.array(vals).reshape(3, 3)))
