"""Exhaustive isomorphism search over small prime fields, plus numeric invariants."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, FieldMismatch, InputError, ShapeError, UnsupportedError
from .field import FieldSpec
from .groups import GroupSpec, WitnessTuple, enumerate_group, enumeration_cap, is_member
from .tensor import ActionKind, DWayArray, apply_general_action, expand_action, flatten


def _flat_ranks(A: DWayArray) -> tuple[int, ...]:
    return tuple(A.field.rank(flatten(A, d)) for d in range(A.order))


class _SliceSolver:
    """Solves (I, .., I, R) . A' = B for R in the last group, B fixed."""

    def __init__(self, G: GroupSpec, B: DWayArray):
        self.G = G
        self.F = B.field
        self.axis = B.order - 1
        self.MB = flatten(B, self.axis)
        if G.family == "GL":
            EB, TB, _ = self.F.rref(self.MB)
            self.EB = EB
            self.TB_inv = self.F.inv(TB)
        self._members: list[np.ndarray] | None = None

    def members(self) -> list[np.ndarray]:
        if self._members is None:
            self._members = list(enumerate_group(self.G))
        return self._members

    def solve(self, Ap: np.ndarray) -> np.ndarray | None:
        F = self.F
        MA = np.moveaxis(Ap, self.axis, 0).reshape(Ap.shape[self.axis], -1)
        if self.G.family == "GL":
            EA, TA, _ = F.rref(MA)
            if not np.array_equal(EA, self.EB):
                return None
            return F.matmul(self.TB_inv, TA)
        sol = F.solve_left(MA, self.MB)
        if sol is None:
            return None
        R0, N = sol
        if N.shape[0] == 0:
            return R0 if is_member(self.G, R0) else None
        for R in self.members():
            if np.array_equal(F.matmul(R, MA), self.MB):
                return R
        return None


def _outer_factors(kind: ActionKind, elems: Sequence[np.ndarray], F: FieldSpec) -> list[np.ndarray]:
    if kind is ActionKind.UUV:
        return [elems[0], elems[0]]
    if kind is ActionKind.UUstarV:
        return [elems[0], F.inv_t(elems[0])]
    return list(elems)


def brute_force_isomorphic(kind: ActionKind, groups: Sequence[GroupSpec], A: DWayArray,
                           B: DWayArray, threads: int = 1) -> WitnessTuple | None:
    """First witness in lex enumeration order, or None if A and B are not isomorphic."""
    kind = ActionKind(kind)
    F = A.field
    if F.kind != "Fp":
        raise UnsupportedError("exhaustive search needs a prime field")
    if B.field != F or any(G.field != F for G in groups):
        raise FieldMismatch("arrays and groups must share one field")
    arity = kind.arity if kind.arity is not None else A.order
    if len(groups) != arity:
        raise ShapeError(f"{kind.value} needs {arity} groups, got {len(groups)}")
    sizes = [f.shape[0] for f in expand_action(kind, [G.field.eye(G.n) for G in groups], F)]
    if tuple(sizes) != A.dims:
        raise ShapeError(f"group degrees {sizes} do not fit dims {A.dims}")
    if A.dims != B.dims:
        return None
    if _flat_ranks(A) != _flat_ranks(B):
        return None

    if kind in (ActionKind.UUUstar, ActionKind.UUU) or A.order < 2:
        outer_groups = list(groups)
        solver = None
    else:
        outer_groups = list(groups[:-1])
        solver = _SliceSolver(groups[-1], B)

    total = 1
    for G in outer_groups:
        total *= _candidate_bound(G)
    if total > enumeration_cap():
        raise CapExceeded(f"{total} outer candidates exceed the enumeration cap")
    pools = [list(enumerate_group(G)) for G in outer_groups]

    def attempt(elems: tuple[np.ndarray, ...]) -> WitnessTuple | None:
        if solver is None:
            w = WitnessTuple(kind, list(elems), list(groups))
            factors = expand_action(kind, elems, F)
            if apply_general_action(factors, A, check=False) == B:
                return w
            return None
        factors = _outer_factors(kind, elems, F)
        data = A.data
        for axis, g in enumerate(factors):
            data = F.mode_product(g, data, axis)
        R = solver.solve(data)
        if R is None:
            return None
        return WitnessTuple(kind, list(elems) + [R], list(groups))

    combos: Iterable = itertools.product(*pools)
    if threads <= 1:
        for elems in combos:
            w = attempt(elems)
            if w is not None:
                return w
        return None
    combos = list(combos)
    chunk = max(1, -(-len(combos) // threads))
    parts = [combos[i:i + chunk] for i in range(0, len(combos), chunk)]

    def scan(part):
        for elems in part:
            w = attempt(elems)
            if w is not None:
                return w
        return None

    with ThreadPoolExecutor(max_workers=threads) as ex:
        for w in ex.map(scan, parts):
            if w is not None:
                return w
    return None


def _candidate_bound(G: GroupSpec) -> int:
    if G.family == "Sym":
        return math.factorial(G.n)
    return G.field.p ** (G.n * G.n)


# -- invariants -------------------------------------------------------------

def _require_float(A: DWayArray) -> None:
    if A.field.kind not in ("R", "C"):
        raise UnsupportedError("numeric invariants need R or C")


def flattening_invariant(A: DWayArray) -> tuple[float, ...]:
    """|det(B B*)| for the flattening B along each direction."""
    _require_float(A)
    out = []
    for d in range(A.order):
        Bm = flatten(A, d)
        out.append(float(abs(np.linalg.det(Bm @ Bm.conj().T))))
    return tuple(out)


def singular_spectrum(A: DWayArray, direction: int) -> np.ndarray:
    _require_float(A)
    if not 0 <= direction < A.order:
        raise InputError(f"direction {direction} out of range")
    return np.linalg.svd(flatten(A, direction), compute_uv=False)
