"""Strip the degenerate part of a real or complex 3-way array.

Each direction is rotated by the left singular vectors of its flattening,
which moves the array into the leading ``l' x m' x n'`` corner where the
slices along every direction are independent.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, UnsupportedError, WitnessError
from ..groups import WitnessTuple
from ..tensor import ActionKind, DWayArray, apply_general_action, flatten
from .common import block_diag, family_of, require_dims, require_forced_zero, witness
from .trace import ReductionTrace


def nondegenerate_compress(A: DWayArray):
    """Return ``(core or None, [T0, T1, T2], trace)``; ``(T0,T1,T2) . A`` is the padded core."""
    F = A.field
    if F.kind not in ("R", "C"):
        raise UnsupportedError("compression uses the SVD and needs R or C")
    if A.order != 3:
        raise ShapeError("expected a 3-way array")
    Ts, core = [], []
    for d in range(3):
        M = flatten(A, d)
        U, s, _ = np.linalg.svd(M)
        r = int(np.sum(s > F.tol * s[0])) if s.size and s[0] > 0 else 0
        Ts.append(F.array(U.conj().T))
        core.append(r)
    rotated = apply_general_action(Ts, A, check=False)
    degenerate = min(core) == 0
    out = None if degenerate else DWayArray(F, rotated.data[:core[0], :core[1], :core[2]].copy())
    trace = ReductionTrace("compress", F, A.dims, tuple(core),
                           {"core": core, "T": Ts, "degenerate": degenerate})
    return out, Ts, trace


def reduce(A: DWayArray):
    core, _, trace = nondegenerate_compress(A)
    return core, trace


def transport(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    """Leading blocks of T_B g T_A^-1; the lower-left blocks must vanish."""
    F = src.field
    if src["degenerate"] or tgt["degenerate"]:
        raise WitnessError("degenerate (zero) array has no core")
    if list(src["core"]) != list(tgt["core"]):
        raise WitnessError("core sizes differ, so the arrays are not isomorphic")
    require_dims(w, list(src.input_dims))
    blocks = []
    for d, (g, S, T, r) in enumerate(zip(w.elements, src["T"], tgt["T"], src["core"])):
        gp = T @ F.array(g) @ S.conj().T
        require_forced_zero(F, gp, range(r, gp.shape[0]), range(0, r), f"direction {d}")
        blocks.append(gp[:r, :r].copy())
    return witness(ActionKind.UVW, F, family_of(w), blocks)


def extract(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    """g_d = T_B^-1 diag(w_d, I) T_A."""
    F = src.field
    require_dims(w, list(src["core"]))
    out = []
    for g, S, T, n in zip(w.elements, src["T"], tgt["T"], src.input_dims):
        r = g.shape[0]
        G = block_diag(F, F.array(g), F.eye(n - r))
        out.append(F.array(T.conj().T @ G @ S))
    return witness(ActionKind.UVW, F, family_of(w), out)
