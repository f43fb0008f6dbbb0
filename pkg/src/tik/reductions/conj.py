"""U x V x W to matrix-space conjugacy: slice A_i becomes [[0, A_i], [0, 0]]."""

from __future__ import annotations

from ..errors import InputError, ShapeError, WitnessError
from ..groups import WitnessTuple
from ..tensor import ActionKind, DWayArray, flatten
from .common import block_diag, family_of, require_dims, require_forced_zero, witness
from .trace import ReductionTrace


def is_nondegenerate(A: DWayArray) -> bool:
    return all(A.field.rank(flatten(A, d)) == A.dims[d] for d in range(A.order))


def reduce(A: DWayArray) -> tuple[DWayArray, ReductionTrace]:
    if A.order != 3:
        raise ShapeError("expected a 3-way array")
    if not is_nondegenerate(A):
        raise InputError("input is degenerate; compress it first")
    F = A.field
    l, m, n = A.dims
    data = F.zeros((l + m, l + m, n)).astype(A.data.dtype)
    data[:l, l:, :] = A.data
    out = DWayArray(F, data)
    return out, ReductionTrace("uvw2conj", F, A.dims, out.dims, {"l": l, "m": m, "n": n})


def transport(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    """(P, Q, R) -> (diag(P, Q^-t), R) under UUstarV."""
    F = src.field
    require_dims(w, [src["l"], src["m"], src["n"]])
    P, Q, R = (F.array(e) for e in w.elements)
    return witness(ActionKind.UUstarV, F, family_of(w), [block_diag(F, P, F.inv_t(Q)), R])


def extract(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    F = src.field
    l, m, n = src["l"], src["m"], src["n"]
    if w.action is not ActionKind.UUstarV:
        raise WitnessError("expected a UUstarV witness")
    require_dims(w, [l + m, n])
    X, Z = (F.array(e) for e in w.elements)
    require_forced_zero(F, X, range(l, l + m), range(0, l), "X21")
    P = X[:l, :l].copy()
    Q = F.inv_t(X[l:, l:].copy())
    return witness(ActionKind.UVW, F, family_of(w), [P, Q, Z])
