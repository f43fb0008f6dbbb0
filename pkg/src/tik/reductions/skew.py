"""U x V x W to skew-symmetric V' x V' x W' via identity-block gadgets.

Slices of the output live on the index blocks
``[U (l) | V (m) | G1 (m+1) | G2 (3m+2)]``. The first n slices carry
``[[0, A_i], [-A_i^t, 0]]``; the next l(m+1) slices are the alternating
elementary matrices pairing U with G1, and the last m(3m+2) pair V with G2.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, WitnessError
from ..groups import WitnessTuple
from ..tensor import ActionKind, DWayArray, permute_directions
from .common import block_diag, family_of, kron_eye, require_dims, require_forced_zero, witness
from .trace import ReductionTrace


def output_dims(l: int, m: int, n: int) -> tuple[int, int, int]:
    N = l + 5 * m + 3
    return N, N, n + l * (m + 1) + m * (3 * m + 2)


def gadget_slice_pairs(l: int, m: int, n: int) -> list[tuple[int, int, int]]:
    """(slice index, row, col) of the +1 entry of every gadget slice."""
    out = []
    for s in range(l):
        for t in range(m + 1):
            out.append((n + s * (m + 1) + t, s, l + m + t))
    base = n + l * (m + 1)
    for s in range(m):
        for t in range(3 * m + 2):
            out.append((base + s * (3 * m + 2) + t, l + s, l + 2 * m + 1 + t))
    return out


def reduce(A: DWayArray, auto_permute: bool = True) -> tuple[DWayArray, ReductionTrace]:
    if A.order != 3:
        raise ShapeError("expected a 3-way array")
    perm = [0, 1, 2]
    if A.dims[0] > A.dims[1]:
        if not auto_permute:
            raise ShapeError("needs dims[0] <= dims[1]")
        perm = [1, 0, 2]
        A = permute_directions(A, perm)
    F = A.field
    l, m, n = A.dims
    dims = output_dims(l, m, n)
    data = F.zeros(dims)
    if F.kind == "C":
        data = data.astype(np.complex128)
    data[:l, l:l + m, :n] = A.data
    data[l:l + m, :l, :n] = F.neg(np.transpose(A.data, (1, 0, 2)))
    one = F.scalar(1)
    minus = F.neg(np.asarray([one]))[0] if F.kind == "Fp" else -one
    for k, r, c in gadget_slice_pairs(l, m, n):
        data[r, c, k] = one
        data[c, r, k] = minus
    out = DWayArray(F, data)
    orig = tuple(A.dims[i] for i in np.argsort(perm))
    trace = ReductionTrace("uvw2vvw", F, orig, dims, {"l": l, "m": m, "n": n, "perm": perm})
    return out, trace


def transport(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    """(P, Q, R) -> (diag(P, Q, I, I), diag(R, P^-t (x) I, Q^-t (x) I)) under UUV."""
    F = src.field
    l, m, n = src["l"], src["m"], src["n"]
    els = [F.array(e) for e in w.elements]
    if list(src["perm"]) != [0, 1, 2]:
        els = [els[1], els[0], els[2]]
    P, Q, R = els
    require_dims(WitnessTuple(w.action, els, []), [l, m, n])
    X = block_diag(F, P, Q, F.eye(m + 1), F.eye(3 * m + 2))
    Z = block_diag(F, R, kron_eye(F, F.inv_t(P), m + 1), kron_eye(F, F.inv_t(Q), 3 * m + 2))
    return witness(ActionKind.UUV, F, family_of(w), [X, Z])


def extract(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    """Check the forced zero blocks of (X, Z), then read off (X_UU, X_VV, Z_11)."""
    F = src.field
    l, m, n = src["l"], src["m"], src["n"]
    N, _, Wd = output_dims(l, m, n)
    if w.action is not ActionKind.UUV:
        raise WitnessError("expected a UUV witness")
    X, Z = (F.array(e) for e in w.elements)
    require_dims(w, [N, Wd])
    U, V, G = range(0, l), range(l, l + m), range(l + m, N)
    require_forced_zero(F, X, U, V, "X[U,V]")
    require_forced_zero(F, X, V, U, "X[V,U]")
    require_forced_zero(F, X, G, U, "X[G,U]")
    require_forced_zero(F, X, G, V, "X[G,V]")
    require_forced_zero(F, Z, range(0, n), range(n, Wd), "Z[A,gadget]")
    els = [X[:l, :l].copy(), X[l:l + m, l:l + m].copy(), Z[:n, :n].copy()]
    if list(src["perm"]) != [0, 1, 2]:
        els = [els[1], els[0], els[2]]
    return witness(ActionKind.UVW, F, family_of(w), els)
