from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tik import acceptance, pathalg
from tik.errors import WitnessError
from tik.field import FieldSpec
from tik.groups import GroupSpec, WitnessTuple, check_witness, sample
from tik.tensor import ActionKind, DWayArray, apply_general_action

F3, F5 = FieldSpec.Fp(3), FieldSpec.Fp(5)
R, C, Q = FieldSpec.R(), FieldSpec.C(), FieldSpec.Q()


def _walks(dims):
    """Count paths in the layered quiver by walking it; independent of the closed form."""
    d = len(dims)
    total = d + 1
    for start in range(d):
        ways = 1
        for stop in range(start, d):
            ways *= dims[stop]
            total += ways
    return total


@given(st.lists(st.integers(1, 4), min_size=1, max_size=5))
def test_path_count_matches_walks(dims):
    assert pathalg.path_count(dims) == _walks(dims) == len(pathalg.build_quiver(dims).paths())


def test_frozen_path_counts():
    assert pathalg.path_count([2, 2]) == 11
    assert pathalg.path_count([2, 2, 2]) == 26
    assert pathalg.path_count([3, 3, 3, 3]) == 5 + 12 + 9 * 3 + 27 * 2 + 81 == 179


def test_labels_and_basis_order():
    f = DWayArray(F3, F3.array([[1, 2], [0, 1]]))
    _, trace = pathalg.reduce_d_to_3(f)
    assert trace["basis"][:7] == ["v1", "v2", "v3", "x1_1", "x1_2", "x2_1", "x2_2"]
    assert len(trace["basis"]) == 10
    assert "x1_1*x2_1" not in trace["basis"]      # the pivot coordinate is dropped


@pytest.mark.parametrize("dims", [(1,), (2,), (1, 2), (2, 2), (2, 1, 2), (2, 2, 2)])
@pytest.mark.parametrize("F", [F3, R, C], ids=str)
def test_algebra_axioms(dims, F):
    assert acceptance.algebra_axioms(dims, F, seed=sum(dims)) == []


def test_non_homomorphism_detected():
    f = DWayArray.random(F3, (2, 2), np.random.default_rng(1))
    c = pathalg.reduce_d_to_3(f)[0].data
    M = sample(GroupSpec("GL", 10, F3), 2)
    lhs = F3.tensordot(F3.tensordot(M, M, ([], [])), c, ([0, 2], [0, 1]))
    rhs = np.moveaxis(F3.tensordot(M, c, ([1], [2])), 0, 2)
    assert not F3.equal(lhs, rhs)


@pytest.mark.parametrize("F", [F3, Q, R, C], ids=str)
def test_round_trip(F):
    shapes = [(2, 2), (1, 2, 2)] if F.kind == "Q" else [(2, 2), (1, 2, 2), (2, 1, 1, 2)]
    for seed, dims in enumerate(shapes):
        f = DWayArray.random(F, dims, np.random.default_rng(seed))
        fam = "GL" if F.exact else ("U" if F.kind == "C" else "O")
        gs = [GroupSpec(fam, n, F) for n in dims]
        w = WitnessTuple(ActionKind.GENERAL, [sample(G, 7 * seed + i) for i, G in enumerate(gs)], gs)
        g = apply_general_action(w.elements, f)
        A, ta = pathalg.reduce_d_to_3(f)
        B, tb = pathalg.reduce_d_to_3(g)
        w2 = pathalg.transport(ta, tb, w)
        assert check_witness(w2, A, B)
        assert pathalg.extract(ta, tb, w2).equals(w, 1e-7)


def test_isomorphic_up_to_scaling():
    # identical ideals, so the identity is an algebra isomorphism, but 2 has no square root mod 3
    f = DWayArray(F3, F3.array([[1, 2], [0, 1]]))
    A, ta = pathalg.reduce_d_to_3(f)
    B, tb = pathalg.reduce_d_to_3(f.scale(2))
    w = WitnessTuple(ActionKind.UUUstar, [F3.eye(A.dims[0])], [GroupSpec("GL", A.dims[0], F3)])
    assert check_witness(w, A, B)
    res = pathalg.extract_diag_blocks(ta, tb, w)
    assert res.up_to_scaling and res.alpha == 2
    with pytest.raises(WitnessError):
        pathalg.extract(ta, tb, w)


def test_scaling_recovered_when_root_exists():
    f = DWayArray(F5, F5.array([[1, 2], [0, 1]]))
    A, ta = pathalg.reduce_d_to_3(f)
    B, tb = pathalg.reduce_d_to_3(f.scale(4))
    w = WitnessTuple(ActionKind.UUUstar, [F5.eye(A.dims[0])], [GroupSpec("GL", A.dims[0], F5)])
    back = pathalg.extract(ta, tb, w)
    assert apply_general_action(back.elements, f) == f.scale(4)


@pytest.mark.parametrize("F, a, d, want", [(Q, Fraction(8, 27), 3, Fraction(2, 3)), (Q, Fraction(-4), 2, None),
                                            (F3, 2, 2, None), (F5, 4, 2, 2), (R, -8.0, 3, -2.0)])
def test_roots(F, a, d, want):
    r = pathalg._root(F, a, d)
    if want is None:
        assert r is None
    else:
        assert abs(r - want) < 1e-12


def test_complex_root():
    r = pathalg._root(C, -1 + 0j, 4)
    assert abs(r ** 4 + 1) < 1e-12


def test_zero_tensor_rejected():
    from tik.errors import InputError
    with pytest.raises(InputError):
        pathalg.reduce_d_to_3(DWayArray.zeros(F3, (2, 2)))
