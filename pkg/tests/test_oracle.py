import numpy as np
import pytest

from tik.errors import CapExceeded, UnsupportedError
from tik.field import FieldSpec
from tik.groups import GroupSpec, check_witness, sample
from tik.oracle import brute_force_isomorphic, flattening_invariant, singular_spectrum
from tik.tensor import ActionKind, DWayArray, apply_five_action

F2, F3 = FieldSpec.Fp(2), FieldSpec.Fp(3)


def _naive_orbit_member(kind, groups, A, B):
    """Enumerate every tuple of group elements directly; slow but independent."""
    from itertools import product
    from tik.groups import enumerate_group
    for els in product(*[list(enumerate_group(G)) for G in groups]):
        if apply_five_action(kind, list(els), A) == B:
            return True
    return False


@pytest.mark.parametrize("kind, sizes", [(ActionKind.UVW, (2, 2, 2)), (ActionKind.UUV, (2, 2)),
                                         (ActionKind.UUstarV, (2, 2)), (ActionKind.UUU, (2,)),
                                         (ActionKind.UUUstar, (2,))])
def test_matches_naive_enumeration(kind, sizes):
    gs = [GroupSpec("GL", n, F2) for n in sizes]
    rng = np.random.default_rng(1)
    for _ in range(12):
        A = DWayArray.random(F2, (2, 2, 2), rng)
        B = DWayArray.random(F2, (2, 2, 2), rng)
        w = brute_force_isomorphic(kind, gs, A, B)
        assert (w is not None) == _naive_orbit_member(kind, gs, A, B)
        if w is not None:
            assert check_witness(w, A, B)


def test_planted_found_under_orthogonal_groups():
    gs = [GroupSpec("O", 2, F3), GroupSpec("O", 2, F3), GroupSpec("O", 3, F3)]
    rng = np.random.default_rng(2)
    A = DWayArray.random(F3, (2, 2, 3), rng)
    B = apply_five_action(ActionKind.UVW, [sample(G, 4 + i) for i, G in enumerate(gs)], A)
    w = brute_force_isomorphic(ActionKind.UVW, gs, A, B, threads=2)
    assert w is not None and check_witness(w, A, B)


def test_cap(monkeypatch):
    monkeypatch.setenv("TIK_CAP", "5")
    gs = [GroupSpec("GL", 2, F2)] * 3
    A = DWayArray.zeros(F2, (2, 2, 2))
    with pytest.raises(CapExceeded):
        brute_force_isomorphic(ActionKind.UVW, gs, A, A)


def test_float_fields_refused():
    R = FieldSpec.R()
    A = DWayArray.zeros(R, (1, 1, 1))
    with pytest.raises(UnsupportedError):
        brute_force_isomorphic(ActionKind.UVW, [GroupSpec("O", 1, R)] * 3, A, A)


def test_invariants_under_unitary_action():
    C = FieldSpec.C()
    rng = np.random.default_rng(3)
    A = DWayArray.random(C, (3, 3, 3), rng)
    U = [sample(GroupSpec("U", 3, C), i) for i in range(3)]
    B = apply_five_action(ActionKind.UVW, U, A)
    np.testing.assert_allclose(flattening_invariant(B), flattening_invariant(A), rtol=1e-9)
    for d in range(3):
        np.testing.assert_allclose(singular_spectrum(B, d), singular_spectrum(A, d), rtol=1e-9)


def test_spectrum_of_diagonal_tensor():
    R = FieldSpec.R()
    data = np.zeros((2, 2, 2))
    data[0, 0, 0], data[1, 1, 1] = 3.0, 4.0
    np.testing.assert_allclose(singular_spectrum(DWayArray(R, data), 0), [4.0, 3.0])
