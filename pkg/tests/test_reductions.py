import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tik import acceptance
from tik.errors import InputError, WitnessError
from tik.field import FieldSpec
from tik.groups import GroupSpec, WitnessTuple, check_witness, sample
from tik.reductions import REGISTRY, compress, conj, extract_witness, graph, skew, transport_witness, vvw
from tik.reductions.trace import ReductionTrace
from tik.tensor import ActionKind, DWayArray, apply_five_action

F2, F3 = FieldSpec.Fp(2), FieldSpec.Fp(3)
R, C = FieldSpec.R(), FieldSpec.C()

CASES = [(rid, F) for rid in REGISTRY for F in acceptance.ROUND_TRIP_FIELDS.get(rid, (R, C, F3))]


@pytest.mark.parametrize("rid, F", CASES, ids=lambda x: str(x))
def test_planted_round_trip(rid, F):
    for seed in range(4):
        assert acceptance.round_trip(rid, F, seed) is None


@pytest.mark.parametrize("rid", list(REGISTRY))
def test_trace_json_roundtrip(rid):
    F = acceptance.ROUND_TRIP_FIELDS.get(rid, (R,))[0]
    case = acceptance._case(rid, F, 1)
    _, ta = case.reduce(case.A)
    _, tb = case.reduce(case.B)
    ta2 = ReductionTrace.from_dict(json.loads(ta.to_json()))
    tb2 = ReductionTrace.from_dict(json.loads(tb.to_json()))
    assert ta2.to_json() == ta.to_json()
    w2 = transport_witness(ta2, tb2, case.w)
    assert extract_witness(ta2, tb2, w2).equals(case.w, 1e-7)


def test_mismatched_traces():
    A = DWayArray.random(R, (2, 2, 2), np.random.default_rng(0))
    _, t1 = skew.reduce(A)
    _, t2 = conj.reduce(A)
    with pytest.raises(InputError):
        transport_witness(t1, t2, None)


def test_perturbed_witnesses_rejected():
    assert acceptance.forced_block_rejections() == []


def test_graph_tensor_slices():
    G = graph.Digraph(3, ((0, 1), (1, 2)))
    T, trace = graph.graph_to_tensor(G, F2)
    assert T.dims == (3, 3, 2)
    assert T.to_dict()["entries"] == [[0, 1, 0, "1"], [1, 2, 1, "1"]]


def test_graph_isomorphism_permutation():
    G = graph.Digraph(4, ((0, 1), (1, 2), (2, 3)))
    sigma = (2, 0, 3, 1)
    H = G.relabel(sigma)
    found = graph.graph_isomorphism(G, H)
    assert found is not None and G.relabel(found) == H
    assert graph.graph_isomorphism(G, graph.Digraph(4, ((0, 1), (1, 2), (3, 2)))) is None


def test_digraph_validation():
    with pytest.raises(InputError):
        graph.Digraph(2, ((0, 2),))
    with pytest.raises(InputError):
        graph.Digraph(2, ((0, 1), (0, 1)))


@pytest.mark.parametrize("l, m, n", [(2, 2, 2), (1, 3, 2), (3, 1, 1)])
def test_skew_output_is_skew(l, m, n):
    for F in (F3, R, C, FieldSpec.Q()):
        out, _ = skew.reduce(DWayArray.random(F, (l, m, n), np.random.default_rng(l + m + n)))
        assert F.equal(np.transpose(out.data, (1, 0, 2)), F.neg(out.data))
        assert out.dims == skew.output_dims(min(l, m), max(l, m), n)


def test_skew_frozen_dims():
    assert skew.output_dims(2, 2, 2) == (15, 15, 24)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4))
def test_conj_dims(l, m, n):
    rng = np.random.default_rng(l * 100 + m * 10 + n)
    A = DWayArray.random(R, (l, m, n), rng)
    if conj.is_nondegenerate(A):
        out, _ = conj.reduce(A)
        assert out.dims == (l + m, l + m, n)
        assert np.allclose(out.data[:l, l:], A.data)


def test_conj_rejects_degenerate():
    with pytest.raises(InputError):
        conj.reduce(DWayArray.zeros(R, (2, 2, 2)))


def test_vvw_dims():
    A = DWayArray.random(F3, (3, 3, 2), np.random.default_rng(0))
    assert vvw.reduce_algebra(A)[0].dims == (5, 5, 5)
    assert vvw.reduce_cubic(A)[0].dims == (5, 5, 5)


def test_compress_strips_padding():
    rng = np.random.default_rng(4)
    core = DWayArray.random(R, (2, 2, 2), rng)
    data = np.zeros((3, 4, 2))
    data[:2, :2, :] = core.data
    gs = [GroupSpec("O", n, R) for n in (3, 4, 2)]
    padded = apply_five_action(ActionKind.UVW, [sample(G, i) for i, G in enumerate(gs)], DWayArray(R, data))
    out, trace = compress.reduce(padded)
    assert out.dims == (2, 2, 2)
    assert trace["core"] == [2, 2, 2]


def test_compress_zero_array():
    out, trace = compress.reduce(DWayArray.zeros(C, (2, 2, 2)))
    assert out is None and trace["degenerate"]


def test_transport_refuses_non_witness_core_mismatch():
    rng = np.random.default_rng(5)
    A = DWayArray.random(R, (2, 2, 2), rng)
    data = np.zeros((2, 2, 2))
    data[0, 0, 0] = 1.0
    B = DWayArray(R, data)
    _, ta = compress.reduce(A)
    _, tb = compress.reduce(B)
    gs = [GroupSpec("O", 2, R)] * 3
    with pytest.raises(WitnessError):
        compress.transport(ta, tb, WitnessTuple(ActionKind.UVW, [R.eye(2)] * 3, gs))


def test_graph_witness_maps_to_tensor_witness():
    G = graph.Digraph(3, ((0, 1), (0, 2), (2, 1)))
    sigma = [1, 2, 0]
    H = G.relabel(sigma)
    A, ta = graph.graph_to_tensor(G, F2)
    B, tb = graph.graph_to_tensor(H, F2)
    w = graph.transport(ta, tb, graph.graph_witness(F2, sigma))
    assert check_witness(w, A, B)
    assert graph.witness_to_sigma(graph.extract(ta, tb, w)) == tuple(sigma)
