"""Helpers shared by the reduction modules."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ShapeError, ToleranceError, WitnessError
from ..field import FieldSpec
from ..groups import GroupSpec, WitnessTuple, check_witness
from ..tensor import ActionKind, DWayArray

FLOAT_BLOCK_TOL = 1e-6


def require_forced_zero(F: FieldSpec, M: np.ndarray, rows, cols, what: str) -> None:
    """Raise unless M[rows, cols] vanishes (relative to the operator norm over floats)."""
    block = M[np.ix_(_idx(rows), _idx(cols))]
    if block.size == 0:
        return
    if F.exact:
        if not F.is_zero(block):
            raise WitnessError(f"forced zero block {what} is nonzero")
        return
    thr = FLOAT_BLOCK_TOL * max(1.0, float(np.linalg.norm(M, 2)))
    worst = float(np.max(np.abs(block)))
    if worst > thr:
        raise ToleranceError(f"forced zero block {what} has entry {worst:.3g} > {thr:.3g}")


def _idx(r) -> np.ndarray:
    if isinstance(r, range):
        return np.arange(r.start, r.stop, r.step, dtype=int)
    return np.asarray(list(r), dtype=int)


def block_diag(F: FieldSpec, *blocks: np.ndarray) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    M = F.zeros((n, n))
    o = 0
    for b in blocks:
        k = b.shape[0]
        M[o:o + k, o:o + k] = b
        o += k
    return M


def kron_eye(F: FieldSpec, M: np.ndarray, k: int) -> np.ndarray:
    """M tensor I_k, indices ordered (row of M)-major."""
    out = np.kron(M, F.eye(k))
    return F.array(out) if F.kind == "Fp" else out


def family_of(w: WitnessTuple) -> str:
    fams = {G.family for G in w.groups}
    if len(fams) != 1:
        raise WitnessError(f"mixed group families {sorted(fams)}")
    fam = fams.pop()
    return "GL" if fam == "Sym" else fam


def groups_for(F: FieldSpec, family: str, sizes: Sequence[int]) -> list[GroupSpec]:
    return [GroupSpec(family, n, F) for n in sizes]


def require_dims(w: WitnessTuple, sizes: Sequence[int]) -> None:
    got = [e.shape[0] for e in w.elements]
    if got != list(sizes):
        raise ShapeError(f"witness degrees {got} do not match the trace ({list(sizes)})")


def verified(w: WitnessTuple, A: DWayArray | None, B: DWayArray | None) -> WitnessTuple:
    if A is not None and B is not None and not check_witness(w, A, B):
        raise WitnessError("extracted tuple fails the witness check")
    return w


def witness(kind: ActionKind, F: FieldSpec, family: str, elements: Sequence[np.ndarray]) -> WitnessTuple:
    return WitnessTuple(kind, list(elements), groups_for(F, family, [e.shape[0] for e in elements]))
