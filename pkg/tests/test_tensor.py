import numpy as np
import pytest
from hypothesis import given, strategies as st

from tik.errors import InputError, ShapeError
from tik.field import FieldSpec
from tik.groups import GroupSpec, sample
from tik.tensor import (ActionKind, DWayArray, apply_five_action, apply_general_action, compose,
                        expand_action, flatten, from_slices, frontal_slices, permute_directions,
                        slice_, unflatten)

F5 = FieldSpec.Fp(5)
KINDS = [ActionKind.UVW, ActionKind.UUV, ActionKind.UUstarV, ActionKind.UUUstar, ActionKind.UUU]


def _setup(kind, F, seed):
    rng = np.random.default_rng(seed)
    sizes = {ActionKind.UVW: (2, 3, 2), ActionKind.UUV: (2, 3), ActionKind.UUstarV: (2, 3)}.get(kind, (3,))
    if len(sizes) == 3:
        dims = sizes
    elif len(sizes) == 2:
        dims = (sizes[0], sizes[0], sizes[1])
    else:
        dims = sizes * 3
    A = DWayArray.random(F, dims, rng)
    g = [sample(GroupSpec("GL", n, F), seed + i) for i, n in enumerate(sizes)]
    h = [sample(GroupSpec("GL", n, F), seed + 10 + i) for i, n in enumerate(sizes)]
    return A, g, h


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
@given(seed=st.integers(0, 10**6))
def test_action_composes(kind, seed):
    for F in (F5, FieldSpec.C()):
        A, g, h = _setup(kind, F, seed)
        lhs = apply_five_action(kind, g, apply_five_action(kind, h, A))
        assert lhs == apply_five_action(kind, compose(kind, g, h, F), A)


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_identity_acts_trivially(kind):
    A, g, _ = _setup(kind, F5, 3)
    assert apply_five_action(kind, [F5.eye(x.shape[0]) for x in g], A) == A


def test_mode_product_convention():
    # g[new, old]: acting on axis 0 with a permutation swaps the first-axis slices
    F = FieldSpec.Fp(7)
    A = DWayArray(F, F.array(np.arange(8).reshape(2, 2, 2)))
    swap = F.array([[0, 1], [1, 0]])
    B = apply_general_action([swap, F.eye(2), F.eye(2)], A)
    assert F.equal(B.data[0], A.data[1])
    assert F.equal(B.data[1], A.data[0])


def test_uustarv_uses_inverse_transpose():
    F = FieldSpec.Q()
    P = F.array([[1, 1], [0, 1]])
    f = expand_action(ActionKind.UUstarV, [P, F.eye(1)], F)
    assert F.equal(F.matmul(f[1].T, P), F.eye(2))


def test_shape_errors():
    A = DWayArray.zeros(F5, (2, 2, 2))
    with pytest.raises(ShapeError):
        apply_five_action(ActionKind.UVW, [F5.eye(2), F5.eye(2), F5.eye(3)], A)
    with pytest.raises(ShapeError):
        apply_five_action(ActionKind.UUV, [F5.eye(2)], A)


def test_json_roundtrip_byte_identical(field, rng):
    A = DWayArray.random(field, (2, 3, 2), rng, density=0.6)
    text = A.to_json()
    B = DWayArray.from_json(text)
    assert B == A
    assert B.to_json() == text


def test_malformed_json():
    with pytest.raises(InputError):
        DWayArray.from_json('{"field": {"kind": "Fp", "p": 3}, "dims": [2], "entries": [[5, "1"]]}')
    with pytest.raises(InputError):
        DWayArray.from_json("{nope")


def test_slices_and_flattenings(rng):
    A = DWayArray.random(F5, (2, 3, 4), rng)
    assert from_slices(F5, frontal_slices(A)) == A
    assert F5.equal(slice_(A, 1, 2), A.data[:, 2, :])
    for d in range(3):
        assert unflatten(F5, flatten(A, d), A.dims, d) == A
    P = permute_directions(A, [2, 0, 1])
    assert P.dims == (4, 2, 3)
