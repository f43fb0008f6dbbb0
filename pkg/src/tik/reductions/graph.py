"""Directed graphs as 3-way arrays of elementary matrices, under the UUV action."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..errors import InputError, ShapeError, WitnessError
from ..field import FieldSpec
from ..groups import GroupSpec, WitnessTuple
from ..tensor import ActionKind, DWayArray
from .trace import ReductionTrace


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        arcs = tuple(sorted({(int(i), int(j)) for i, j in self.arcs}))
        if len(arcs) != len(self.arcs):
            raise InputError("duplicate arcs")
        if any(not (0 <= i < self.n and 0 <= j < self.n) for i, j in arcs):
            raise InputError("arc endpoint out of range")
        object.__setattr__(self, "arcs", arcs)

    def relabel(self, sigma: Sequence[int]) -> "Digraph":
        return Digraph(self.n, tuple((sigma[i], sigma[j]) for i, j in self.arcs))

    def to_dict(self) -> dict:
        return {"n": self.n, "arcs": [list(a) for a in self.arcs]}

    @classmethod
    def from_dict(cls, d: dict) -> "Digraph":
        try:
            return cls(int(d["n"]), tuple(tuple(a) for a in d["arcs"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed digraph document: {exc}") from exc


def all_digraphs(n: int, arc_counts: Sequence[int], loops: bool = False) -> Iterator[Digraph]:
    slots = [(i, j) for i in range(n) for j in range(n) if loops or i != j]
    for k in arc_counts:
        for arcs in itertools.combinations(slots, k):
            yield Digraph(n, arcs)


def graph_isomorphism(G: Digraph, H: Digraph) -> tuple[int, ...] | None:
    """First vertex permutation (lex order) mapping G onto H."""
    if G.n != H.n or len(G.arcs) != len(H.arcs):
        return None
    target = set(H.arcs)
    for sigma in itertools.permutations(range(G.n)):
        if all((sigma[i], sigma[j]) in target for i, j in G.arcs):
            return sigma
    return None


def perm_matrix(F: FieldSpec, sigma: Sequence[int]) -> np.ndarray:
    """Matrix with a one at (sigma(i), i)."""
    n = len(sigma)
    M = F.zeros((n, n))
    for i, s in enumerate(sigma):
        M[s, i] = F.scalar(1)
    return M


def graph_to_tensor(G: Digraph, field: FieldSpec) -> tuple[DWayArray, ReductionTrace]:
    if not G.arcs:
        raise InputError("graph has no arcs")
    data = field.zeros((G.n, G.n, len(G.arcs)))
    for k, (i, j) in enumerate(G.arcs):
        data[i, j, k] = field.scalar(1)
    A = DWayArray(field, data)
    trace = ReductionTrace("graph3", field, (G.n,), A.dims,
                           {"n": G.n, "arcs": [list(a) for a in G.arcs]})
    return A, trace


def _arcs(trace: ReductionTrace) -> list[tuple[int, int]]:
    return [tuple(a) for a in trace["arcs"]]


def transport(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple,
              family: str = "GL") -> WitnessTuple:
    """Vertex permutation -> (P_sigma, P_tau) for the UUV action."""
    F = src.field
    P = F.array(w.elements[0])
    n = src["n"]
    if P.shape != (n, n):
        raise ShapeError("witness does not match the vertex count")
    sigma = [int(np.nonzero(P[:, i])[0][0]) for i in range(n)]
    arcs_h = {a: k for k, a in enumerate(_arcs(tgt))}
    try:
        tau = [arcs_h[(sigma[i], sigma[j])] for i, j in _arcs(src)]
    except KeyError as exc:
        raise WitnessError("permutation does not map arcs onto arcs") from exc
    m = len(tau)
    return WitnessTuple(ActionKind.UUV, [perm_matrix(F, sigma), perm_matrix(F, tau)],
                        [GroupSpec(family, n, F), GroupSpec(family, m, F)])


def support_permutations(F: FieldSpec, T: np.ndarray) -> Iterator[tuple[int, ...]]:
    """Permutations sigma with T[sigma(i), i] != 0, in lex order."""
    n = T.shape[0]
    mask = F.nonzero_mask(T)
    nz = [list(np.nonzero(mask[:, i])[0]) for i in range(n)]

    def rec(i: int, used: list[int]):
        if i == n:
            yield tuple(int(k) for k in used)
            return
        for k in nz[i]:
            if k not in used:
                used.append(k)
                yield from rec(i + 1, used)
                used.pop()

    yield from rec(0, [])


def extract(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    """Recover a vertex permutation from any linear witness (P, Q)."""
    F = src.field
    P = F.array(w.elements[0])
    G = Digraph(src["n"], tuple(_arcs(src)))
    H = Digraph(tgt["n"], tuple(_arcs(tgt)))
    if len(G.arcs) != len(H.arcs):
        raise WitnessError("arc counts differ")
    target = set(H.arcs)
    for sigma in support_permutations(F, P):
        if all((sigma[i], sigma[j]) in target for i, j in G.arcs):
            return WitnessTuple(ActionKind.GENERAL, [perm_matrix(F, sigma)], [GroupSpec("Sym", G.n, F)])
    raise WitnessError("no permutation on the support of P preserves arcs")


def graph_witness(F: FieldSpec, sigma: Sequence[int]) -> WitnessTuple:
    return WitnessTuple(ActionKind.GENERAL, [perm_matrix(F, sigma)], [GroupSpec("Sym", len(sigma), F)])


def witness_to_sigma(w: WitnessTuple) -> tuple[int, ...]:
    P = w.elements[0]
    return tuple(int(np.nonzero(P[:, i])[0][0]) for i in range(P.shape[0]))
