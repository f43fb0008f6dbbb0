import numpy as np
import pytest

from tik.errors import InputError, WitnessError
from tik.field import FieldSpec
from tik.groups import GroupSpec, WitnessTuple, check_witness, sample
from tik.reductions import system
from tik.reductions.system import Leg, TensorSystem
from tik.tensor import ActionKind, DWayArray, apply_five_action, slice_

F2, F3 = FieldSpec.Fp(2), FieldSpec.Fp(3)
R = FieldSpec.R()
ACTIONS = [ActionKind.UVW, ActionKind.UUV, ActionKind.UUstarV, ActionKind.UUUstar, ActionKind.UUU]


def _instance(kind, F, seed, n=2):
    rng = np.random.default_rng(seed)
    dims = {ActionKind.UVW: (n, n + 1, n), ActionKind.UUV: (n, n, 1), ActionKind.UUstarV: (n, n, 1)}.get(kind, (n,) * 3)
    return DWayArray.random(F, dims, rng)


@pytest.mark.parametrize("kind", ACTIONS, ids=lambda k: k.value)
def test_slice_ranks_separate_levels(kind):
    A = _instance(kind, R, 1)
    S = system.encode_action_system(A, kind)
    if S.is_plain():
        pytest.skip("already plain")
    out, trace = system.fgs_plainify(S)
    assert out.dims == system.plainify_dims(S)
    for d in range(3):
        r = trace["r"][d]
        for b in trace["blocks"][d]:
            for i in range(b["offset"], b["offset"] + b["size"]):
                rk = R.rank(slice_(out, d, i))
                assert b["tag"] <= rk <= b["tag"] + r


@pytest.mark.parametrize("kind", ACTIONS, ids=lambda k: k.value)
def test_dims_within_bound(kind):
    S = system.encode_action_system(_instance(kind, F3, 0), kind)
    assert max(system.plainify_dims(S)) <= system.dimension_bound(S)


def test_plain_input_passes_through():
    A = _instance(ActionKind.UVW, F3, 2)
    S = system.encode_action_system(A, ActionKind.UVW)
    assert S.is_plain()
    out, trace = system.fgs_plainify(S)
    assert out == A and trace["plain"]


def test_system_json_roundtrip():
    S = system.encode_classical_system(_instance(ActionKind.UVW, F3, 3), [F3.eye(2), F3.eye(3), F3.eye(2)])
    S2 = TensorSystem.from_dict(S.to_dict())
    assert S2.to_dict() == S.to_dict()


def test_system_validation():
    T = DWayArray.zeros(F3, (2, 2))
    with pytest.raises(InputError):
        TensorSystem(F3, (("U", 3),), ((T, (Leg(0), Leg(0))),))


def test_classical_iso_matches_system_iso():
    """O-isomorphism of arrays equals GL-isomorphism of the encoded systems."""
    from tik.oracle import brute_force_isomorphic
    gs = [GroupSpec("O", 2, F2)] * 3
    forms = [G.form for G in gs]
    rng = np.random.default_rng(8)
    arrays = [DWayArray.random(F2, (2, 2, 2), rng) for _ in range(10)]
    for A in arrays:
        for B in arrays:
            w = brute_force_isomorphic(ActionKind.UVW, gs, A, B)
            g = system.system_brute_force(system.encode_classical_system(A, forms),
                                          system.encode_classical_system(B, forms))
            assert (w is None) == (g is None)


def test_classical_round_trip_and_rejection():
    gs = [GroupSpec("O", n, F3) for n in (2, 1, 1)]
    A = DWayArray.random(F3, (2, 1, 1), np.random.default_rng(4))
    els = [sample(G, 10 + i) for i, G in enumerate(gs)]
    B = apply_five_action(ActionKind.UVW, els, A)
    ra, ta = system.reduce_classical_to_gl(A, gs)
    rb, tb = system.reduce_classical_to_gl(B, gs)
    w = WitnessTuple(ActionKind.UVW, els, gs)
    w2 = system.classical_transport(ta, tb, w)
    assert check_witness(w2, ra, rb)
    assert system.classical_extract(ta, tb, w2).equals(w)
    bad = [x.copy() for x in w2.elements]
    lev = system.levels(ta["inner"], 1)
    lo, hi = int(np.argmin(np.where(lev > 0, lev, 99))), int(np.argmax(lev))
    bad[1][lo, hi] = (bad[1][lo, hi] + 1) % 3
    with pytest.raises(WitnessError):
        system.classical_extract(ta, tb, WitnessTuple(ActionKind.UVW, bad, w2.groups))


def test_classical_needs_exact_field():
    with pytest.raises(InputError):
        system.reduce_classical_to_gl(DWayArray.zeros(R, (1, 1, 1)), [GroupSpec("O", 1, R)] * 3)
