"""Bilinear maps V x V -> W as algebras (V' x V' x V'*) or cubic forms (V' x V' x V').

With V' = V + W, the first dim V slices are zero and slice ``l + j`` is
``[[A_j, 0], [0, 0]]``.
"""

from __future__ import annotations

from ..errors import InputError, ShapeError, WitnessError
from ..groups import WitnessTuple
from ..tensor import ActionKind, DWayArray, flatten
from .common import block_diag, family_of, require_dims, require_forced_zero, witness
from .trace import ReductionTrace


def _build(A: DWayArray, rid: str) -> tuple[DWayArray, ReductionTrace]:
    if A.order != 3 or A.dims[0] != A.dims[1]:
        raise ShapeError("expected an l x l x m array")
    F = A.field
    l, _, m = A.dims
    if F.rank(flatten(A, 2)) < m:
        raise InputError("frontal slices are linearly dependent")
    N = l + m
    data = F.zeros((N, N, N)).astype(A.data.dtype)
    data[:l, :l, l:] = A.data
    out = DWayArray(F, data)
    return out, ReductionTrace(rid, F, A.dims, out.dims, {"l": l, "m": m})


def reduce_algebra(A: DWayArray) -> tuple[DWayArray, ReductionTrace]:
    return _build(A, "vvw2alg")


def reduce_cubic(A: DWayArray) -> tuple[DWayArray, ReductionTrace]:
    return _build(A, "vvw2cubic")


def transport(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    """(P, Q) -> diag(P, Q^-t) for the algebra action, diag(P, Q) for the cubic one."""
    F = src.field
    require_dims(w, [src["l"], src["m"]])
    P, Q = (F.array(e) for e in w.elements)
    if src.rid == "vvw2alg":
        return witness(ActionKind.UUUstar, F, family_of(w), [block_diag(F, P, F.inv_t(Q))])
    return witness(ActionKind.UUU, F, family_of(w), [block_diag(F, P, Q)])


def extract(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    F = src.field
    l, m = src["l"], src["m"]
    require_dims(w, [l + m])
    X = F.array(w.elements[0])
    if src.rid == "vvw2alg":
        if w.action is not ActionKind.UUUstar:
            raise WitnessError("expected a UUUstar witness")
        require_forced_zero(F, X, range(l, l + m), range(0, l), "X21")
        P, Q = X[:l, :l].copy(), F.inv_t(X[l:, l:].copy())
    else:
        if w.action is not ActionKind.UUU:
            raise WitnessError("expected a UUU witness")
        require_forced_zero(F, X, range(0, l), range(l, l + m), "X12")
        P, Q = X[:l, :l].copy(), X[l:, l:].copy()
    return witness(ActionKind.UUV, F, family_of(w), [P, Q])
