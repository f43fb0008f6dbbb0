"""Tensor systems and their reduction to a single plain 3-tensor.

A tensor system is a family of arrays whose legs are tagged with a
supporting space and a variance. ``g = (g_s)`` acts on a covariant leg of
space s by ``g_s`` and on a contravariant leg by ``g_s^-t``.

Plainification runs in two stages.

1. Linked blocks. Each leg is given a direction 0, 1 or 2, and each
   (space, direction, variance) triple becomes a block of that direction.
   Blocks of one space are tied together by identity matrices placed on a
   covariant and a contravariant block in two different directions. Every
   direction also has a 1-dimensional dummy block; the dummies fill unused
   directions of low-order tensors, and a single anchor entry on the three
   dummies fixes the scalars.

2. Rank separation. Block b of direction d gets a level and a tag of size
   ``s_b = level * (r_d + 1)``, where r_d bounds the rank contributed by
   everything else. The tag adds ``e_{b,p} (x) g_t (x) h_{b,p,t}``, with the
   g vectors shared in direction d+1 and fresh h vectors in direction d+2.
   Slice ranks then pin down levels, so a plain witness can never move a
   vector to a block of lower level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..errors import CapExceeded, InputError, ShapeError, UnsupportedError, WitnessError
from ..field import FieldSpec
from ..groups import GroupSpec, WitnessTuple, enumerate_group, enumeration_cap, is_member
from ..tensor import ActionKind, DWayArray, apply_general_action
from .common import FLOAT_BLOCK_TOL, family_of
from .trace import ReductionTrace


@dataclass(frozen=True)
class Leg:
    space: int
    contra: bool = False


@dataclass(frozen=True, eq=False)
class TensorSystem:
    field: FieldSpec
    spaces: tuple[tuple[str, int], ...]
    tensors: tuple[tuple[DWayArray, tuple[Leg, ...]], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "spaces", tuple((str(n), int(d)) for n, d in self.spaces))
        object.__setattr__(self, "tensors", tuple((T, tuple(legs)) for T, legs in self.tensors))
        if not self.tensors:
            raise InputError("empty tensor system")
        for T, legs in self.tensors:
            if T.field != self.field:
                raise InputError("tensor field differs from the system field")
            if T.order > 3:
                raise UnsupportedError("tensors of order above 3 are out of scope")
            if len(legs) != T.order:
                raise ShapeError("one leg per tensor axis required")
            for leg, n in zip(legs, T.dims):
                if not 0 <= leg.space < len(self.spaces):
                    raise InputError(f"leg refers to unknown space {leg.space}")
                if self.spaces[leg.space][1] != n:
                    raise ShapeError(f"axis of size {n} on space {self.spaces[leg.space]}")

    @property
    def signature(self) -> tuple:
        """The type of the system: everything except the array entries."""
        return (self.field, self.spaces,
                tuple((T.dims, tuple((l.space, l.contra) for l in legs)) for T, legs in self.tensors))

    def same_type(self, other: "TensorSystem") -> bool:
        return self.signature == other.signature

    def is_plain(self) -> bool:
        if len(self.tensors) != 1:
            return False
        T, legs = self.tensors[0]
        return T.order == 3 and not any(l.contra for l in legs) and len({l.space for l in legs}) == 3

    def to_dict(self) -> dict:
        return {
            "field": self.field.to_dict(),
            "spaces": [[n, d] for n, d in self.spaces],
            "tensors": [{"tensor": T.to_dict(), "legs": [[l.space, "contra" if l.contra else "co"] for l in legs]}
                        for T, legs in self.tensors],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TensorSystem":
        try:
            F = FieldSpec.from_dict(d["field"])
            tensors = [(DWayArray.from_dict(t["tensor"]),
                        tuple(Leg(int(s), v == "contra") for s, v in t["legs"])) for t in d["tensors"]]
            return cls(F, tuple(tuple(s) for s in d["spaces"]), tuple(tensors))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed tensor system: {exc}") from exc


def apply_system(g: Sequence[np.ndarray], S: TensorSystem) -> TensorSystem:
    F = S.field
    inv_t = [F.inv_t(F.array(x)) for x in g]
    out = []
    for T, legs in S.tensors:
        factors = [inv_t[l.space] if l.contra else F.array(g[l.space]) for l in legs]
        out.append((apply_general_action(factors, T, check=False), legs))
    return TensorSystem(F, S.spaces, tuple(out))


def check_system_witness(g: Sequence[np.ndarray], S: TensorSystem, T: TensorSystem) -> bool:
    if not S.same_type(T) or len(g) != len(S.spaces):
        return False
    F = S.field
    for x, (_, n) in zip(g, S.spaces):
        if np.asarray(x).shape != (n, n) or F.rank(F.array(x)) < n:
            return False
    image = apply_system(g, S)
    return all(a == b for (a, _), (b, _) in zip(image.tensors, T.tensors))


def system_brute_force(S: TensorSystem, T: TensorSystem) -> list[np.ndarray] | None:
    """First system isomorphism over a prime field (GL on every space), or None.

    Candidates for each space are first filtered by the tensors that live on
    that space alone.
    """
    F = S.field
    if F.kind != "Fp":
        raise UnsupportedError("exhaustive search needs a prime field")
    if not S.same_type(T):
        return None
    pools = []
    for s, (_, n) in enumerate(S.spaces):
        own = [i for i, (_, legs) in enumerate(S.tensors) if {l.space for l in legs} == {s}]
        pool = []
        for M in enumerate_group(GroupSpec("GL", n, F)):
            Mi = F.inv_t(M)
            ok = True
            for i in own:
                A, legs = S.tensors[i]
                factors = [Mi if l.contra else M for l in legs]
                if apply_general_action(factors, A, check=False) != T.tensors[i][0]:
                    ok = False
                    break
            if ok:
                pool.append(M)
        pools.append(pool)
    total = int(np.prod([len(p) for p in pools]))
    if total > enumeration_cap():
        raise CapExceeded(f"{total} system candidates exceed the enumeration cap")
    for g in itertools.product(*pools):
        if check_system_witness(g, S, T):
            return list(g)
    return None


# -- encodings ----------------------------------------------------------------

def encode_classical_system(A: DWayArray, forms: Sequence[np.ndarray]) -> TensorSystem:
    """A on (U, V, W) plus each form on two contravariant legs of its space.

    g then preserves the system exactly when g_s^t Phi_s g_s = Phi_s.
    """
    if A.order != 3 or len(forms) != 3:
        raise ShapeError("need a 3-way array and three forms")
    F = A.field
    tensors = [(A, (Leg(0), Leg(1), Leg(2)))]
    for s, (Phi, n) in enumerate(zip(forms, A.dims)):
        Phi = F.array(Phi)
        if Phi.shape != (n, n) or F.rank(Phi) < n:
            raise InputError(f"form {s} must be a full-rank {n}x{n} matrix")
        tensors.append((DWayArray(F, Phi), (Leg(s, True), Leg(s, True))))
    return TensorSystem(F, (("U", A.dims[0]), ("V", A.dims[1]), ("W", A.dims[2])), tuple(tensors))


_ACTION_LEGS = {
    ActionKind.UVW: ((0, False), (1, False), (2, False)),
    ActionKind.UUV: ((0, False), (0, False), (1, False)),
    ActionKind.UUstarV: ((0, False), (0, True), (1, False)),
    ActionKind.UUUstar: ((0, False), (0, False), (0, True)),
    ActionKind.UUU: ((0, False), (0, False), (0, False)),
}


def encode_action_system(A: DWayArray, kind: ActionKind) -> TensorSystem:
    """One-tensor system whose isomorphisms are exactly the ``kind`` action."""
    kind = ActionKind(kind)
    legs = tuple(Leg(s, c) for s, c in _ACTION_LEGS[kind])
    nsp = max(l.space for l in legs) + 1
    dims = [0] * nsp
    for l, n in zip(legs, A.dims):
        if dims[l.space] not in (0, n):
            raise ShapeError(f"{kind.value} needs matching dims on shared spaces, got {A.dims}")
        dims[l.space] = n
    names = "UVW"
    return TensorSystem(A.field, tuple((names[i], dims[i]) for i in range(nsp)), ((A, legs),))


# -- layout ------------------------------------------------------------------

_NODES = tuple((d, v) for d in range(3) for v in (False, True))


def _adjacent(a, b) -> bool:
    return a[0] != b[0] and a[1] != b[1]


def _connected(nodes: frozenset) -> bool:
    if not nodes:
        return True
    start = min(nodes)
    seen, todo = {start}, [start]
    while todo:
        u = todo.pop()
        for v in nodes:
            if v not in seen and _adjacent(u, v):
                seen.add(v)
                todo.append(v)
    return len(seen) == len(nodes)


@lru_cache(maxsize=None)
def _connector(required: frozenset) -> tuple:
    """Smallest connected node set containing ``required`` (lex-first on ties)."""
    others = [n for n in _NODES if n not in required]
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            nodes = frozenset(required) | frozenset(extra)
            if _connected(nodes):
                return tuple(sorted(nodes))
    raise AssertionError("the node graph is connected")


def _spanning_edges(nodes: tuple) -> list[tuple]:
    if not nodes:
        return []
    seen, order, edges = {nodes[0]}, [nodes[0]], []
    i = 0
    while i < len(order):
        u = order[i]
        for v in nodes:
            if v not in seen and _adjacent(u, v):
                seen.add(v)
                order.append(v)
                edges.append((u, v))
        i += 1
    return edges


def _signature_layout(spaces: tuple, legs_list: tuple) -> dict:
    """Leg directions, blocks and links, as a function of the system type only."""
    choices = [list(itertools.permutations(range(3), len(legs))) for legs in legs_list]
    best = None
    for assign in itertools.product(*choices):
        required: dict[int, set] = {}
        for legs, dirs in zip(legs_list, assign):
            for (s, c), d in zip(legs, dirs):
                required.setdefault(s, set()).add((d, c))
        nodes = {s: _connector(frozenset(req)) for s, req in required.items()}
        size = sum(len(nodes[s]) * spaces[s][1] for s in nodes)
        links = sum(len(nodes[s]) - 1 for s in nodes)
        per_dir = [sum(spaces[s][1] for s in nodes for (d, _) in nodes[s] if d == k) for k in range(3)]
        cost = (size, max(per_dir), links)
        if best is None or cost < best[0]:
            best = (cost, assign, nodes)
    _, assign, nodes = best
    blocks: list[list[dict]] = [[{"kind": "delta", "space": -1, "contra": False, "size": 1}] for _ in range(3)]
    for s in sorted(nodes):
        for d, c in nodes[s]:
            blocks[d].append({"kind": "space", "space": s, "contra": c, "size": spaces[s][1]})
    for d in range(3):
        head, rest = blocks[d][0], sorted(blocks[d][1:], key=lambda b: (b["space"], b["contra"]))
        blocks[d] = [head] + rest
        off = 0
        for b in blocks[d]:
            b["offset"] = off
            off += b["size"]
    links = []
    for s in sorted(nodes):
        for (d1, c1), (d2, c2) in _spanning_edges(nodes[s]):
            links.append({"space": s, "a": [d1, c1], "b": [d2, c2]})
    return {"assign": [list(a) for a in assign], "blocks": blocks, "links": links}


def _find_block(blocks: list[dict], space: int, contra: bool) -> dict:
    for b in blocks:
        if b["kind"] == "space" and b["space"] == space and b["contra"] == contra:
            return b
    raise KeyError((space, contra))


def _tag_layout(blocks: list[list[dict]]) -> dict:
    o = [sum(b["size"] for b in blocks[d]) for d in range(3)]
    r = [o[(d + 1) % 3] + o[(d + 2) % 3] for d in range(3)]
    g, h = [], []
    for d in range(3):
        order = sorted(range(len(blocks[d])), key=lambda i: (-blocks[d][i]["size"], i))
        for lvl, i in enumerate(order, start=1):
            blocks[d][i]["level"] = lvl
            blocks[d][i]["tag"] = lvl * (r[d] + 1)
        hoff = 0
        for b in blocks[d]:
            b["h_offset"] = hoff
            hoff += b["size"] * b["tag"]
        g.append(max(b["tag"] for b in blocks[d]))
        h.append(hoff)
    dims = [o[d] + g[(d - 1) % 3] + h[(d - 2) % 3] for d in range(3)]
    return {"o": o, "r": r, "g": g, "h": h, "dims": dims}


def plainify_layout(S: TensorSystem) -> dict:
    spaces = S.spaces
    legs_list = tuple(tuple((l.space, l.contra) for l in legs) for _, legs in S.tensors)
    lay = _signature_layout(spaces, legs_list)
    lay.update(_tag_layout(lay["blocks"]))
    return lay


def plainify_dims(S: TensorSystem) -> tuple[int, int, int]:
    """Output dims without materializing the array."""
    if S.is_plain():
        T, legs = S.tensors[0]
        return tuple(T.dims)
    return tuple(plainify_layout(S)["dims"])


def dimension_bound(S: TensorSystem) -> int:
    """A polynomial bound on every output dimension of the construction."""
    total = sum(n for _, n in S.spaces)
    c = len(S.spaces)
    return (2 * total + 2) * (2 * c + 2) * (4 * total + 3)


# -- the reduction -----------------------------------------------------------

def fgs_plainify(S: TensorSystem) -> tuple[DWayArray, ReductionTrace]:
    F = S.field
    space_dims = [n for _, n in S.spaces]
    if S.is_plain():
        T, legs = S.tensors[0]
        order = [l.space for l in legs]
        trace = ReductionTrace("plainify", F, tuple(space_dims), T.dims,
                               {"plain": True, "order": order, "spaces": space_dims})
        return T, trace
    lay = plainify_layout(S)
    blocks, o, g, dims = lay["blocks"], lay["o"], lay["g"], lay["dims"]
    data = F.zeros(tuple(dims))
    one = F.scalar(1)
    data[0, 0, 0] = one

    def put(piece: np.ndarray, dirs: Sequence[int], offsets: dict[int, int]) -> None:
        # piece axes follow ``dirs``; unused directions sit on the dummy at offset 0
        perm = sorted(range(len(dirs)), key=lambda k: dirs[k])
        arr = np.transpose(piece, perm)
        used = sorted(dirs)
        full = arr.reshape([arr.shape[used.index(d)] if d in used else 1 for d in range(3)])
        sl = tuple(slice(offsets.get(d, 0), offsets.get(d, 0) + full.shape[d]) for d in range(3))
        data[sl] = full

    for (T, legs), dirs in zip(S.tensors, lay["assign"]):
        offs = {d: _find_block(blocks[d], l.space, l.contra)["offset"] for l, d in zip(legs, dirs)}
        put(T.data, list(dirs), offs)
    for link in lay["links"]:
        s = link["space"]
        (d1, c1), (d2, c2) = link["a"], link["b"]
        b1, b2 = _find_block(blocks[d1], s, c1), _find_block(blocks[d2], s, c2)
        put(F.eye(b1["size"]), [d1, d2], {d1: b1["offset"], d2: b2["offset"]})
    for d in range(3):
        d1, d2 = (d + 1) % 3, (d + 2) % 3
        g_off = o[d1]
        h_off = o[d2] + g[(d2 - 1) % 3]
        for b in blocks[d]:
            for p in range(b["size"]):
                for t in range(b["tag"]):
                    idx = [0, 0, 0]
                    idx[d] = b["offset"] + p
                    idx[d1] = g_off + t
                    idx[d2] = h_off + b["h_offset"] + p * b["tag"] + t
                    data[tuple(idx)] = one
    out = DWayArray(F, data)
    layout = {"plain": False, "spaces": space_dims, **lay}
    return out, ReductionTrace("plainify", F, tuple(space_dims), out.dims, layout)


def _block_matrix(F: FieldSpec, b: dict, g: Sequence[np.ndarray]) -> np.ndarray:
    if b["kind"] == "delta":
        return F.eye(1)
    M = F.array(g[b["space"]])
    return F.inv_t(M) if b["contra"] else M


def transport(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple,
              family: str | None = None) -> WitnessTuple:
    """System witness (one element per space) -> plain UVW witness."""
    F = src.field
    fam = family or family_of(w)
    g = [F.array(x) for x in w.elements]
    if [x.shape[0] for x in g] != list(src["spaces"]):
        raise ShapeError("witness does not match the system spaces")
    if src["plain"]:
        els = [g[s] for s in src["order"]]
        return WitnessTuple(ActionKind.UVW, els, [GroupSpec(fam, x.shape[0], F) for x in els])
    blocks, o, gs, dims = src["blocks"], src["o"], src["g"], src["dims"]
    mats = [[_block_matrix(F, b, g) for b in blocks[d]] for d in range(3)]
    out = []
    for d in range(3):
        X = F.zeros((dims[d], dims[d]))
        for b, M in zip(blocks[d], mats[d]):
            X[b["offset"]:b["offset"] + b["size"], b["offset"]:b["offset"] + b["size"]] = M
        gowner, howner = (d - 1) % 3, (d - 2) % 3
        base = o[d]
        X[base:base + gs[gowner], base:base + gs[gowner]] = F.eye(gs[gowner])
        base += gs[gowner]
        for b, M in zip(blocks[howner], mats[howner]):
            k = b["size"] * b["tag"]
            off = base + b["h_offset"]
            blk = np.kron(F.inv_t(M), F.eye(b["tag"]))
            X[off:off + k, off:off + k] = F.array(blk)
        out.append(X)
    return WitnessTuple(ActionKind.UVW, out, [GroupSpec(fam, n, F) for n in dims])


def levels(trace: ReductionTrace, d: int) -> np.ndarray:
    """Level of every coordinate of direction d (0 for tag coordinates)."""
    lev = np.zeros(trace["dims"][d], dtype=int)
    for b in trace["blocks"][d]:
        lev[b["offset"]:b["offset"] + b["size"]] = b["level"]
    return lev


def block_ids(trace: ReductionTrace, d: int) -> np.ndarray:
    ids = np.full(trace["dims"][d], -1, dtype=int)
    for i, b in enumerate(trace["blocks"][d]):
        ids[b["offset"]:b["offset"] + b["size"]] = i
    return ids


def _masked_zero(F: FieldSpec, M: np.ndarray, mask: np.ndarray, what: str) -> None:
    vals = M[mask]
    if vals.size == 0:
        return
    if F.exact:
        if not F.is_zero(vals):
            raise WitnessError(what)
        return
    thr = FLOAT_BLOCK_TOL * max(1.0, float(np.linalg.norm(M, 2)))
    if float(np.max(np.abs(vals))) > thr:
        raise WitnessError(what)


def extract(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    """Plain UVW witness -> system witness, after checking the forced block structure."""
    F = src.field
    X = [F.array(x) for x in w.elements]
    if src["plain"]:
        g: list = [None] * len(src["spaces"])
        for x, s in zip(X, src["order"]):
            g[s] = x
        return WitnessTuple(ActionKind.GENERAL, g, [GroupSpec(family_of(w), x.shape[0], F) for x in g])
    if [x.shape[0] for x in X] != list(src["dims"]):
        raise ShapeError("witness does not match the plain dims")
    for d in range(3):
        lev = levels(src, d)
        _masked_zero(F, X[d], lev[None, :] > lev[:, None],
                     f"direction {d}: a coordinate is sent below its level")
        ids = block_ids(src, d)
        cross = (ids[:, None] != ids[None, :]) & (ids[:, None] >= 0) & (ids[None, :] >= 0)
        _masked_zero(F, X[d], cross, f"direction {d}: witness mixes blocks of different levels")
    x0, y1 = X[0][0, 0], X[1][0, 0]
    if F.exact:
        ix, iy = F.inv_scalar(x0), F.inv_scalar(y1)
        X = [F.scale(ix, X[0]), F.scale(iy, X[1]), F.scale(F.scalar(x0) * F.scalar(y1), X[2])]
    else:
        X = [X[0] / x0, X[1] / y1, X[2] * (x0 * y1)]
    if not F.equal(X[2][:1, :1], F.eye(1)):
        raise WitnessError("anchor entry is not preserved")
    nspace = len(src["spaces"])
    g = [None] * nspace
    for d in range(3):
        for b in src["blocks"][d]:
            if b["kind"] != "space":
                continue
            M = X[d][b["offset"]:b["offset"] + b["size"], b["offset"]:b["offset"] + b["size"]].copy()
            cand = F.inv_t(M) if b["contra"] else M
            s = b["space"]
            if g[s] is None:
                g[s] = cand
            elif not F.equal(g[s], cand):
                raise WitnessError(f"blocks of space {s} disagree")
    fam = family_of(w)
    return WitnessTuple(ActionKind.GENERAL, g, [GroupSpec(fam, x.shape[0], F) for x in g])


# -- classical groups to GL --------------------------------------------------

def reduce_classical_to_gl(A: DWayArray, groups: Sequence[GroupSpec]) -> tuple[DWayArray, ReductionTrace]:
    F = A.field
    if not F.exact:
        raise UnsupportedError("classical-to-GL reduction needs an exact field")
    if len(groups) != 3 or any(G.family not in ("O", "Sp") for G in groups):
        raise InputError("need three form-preserving groups (O or Sp)")
    if [G.n for G in groups] != list(A.dims):
        raise ShapeError("group degrees must match the array dims")
    S = encode_classical_system(A, [G.form for G in groups])
    out, inner = fgs_plainify(S)
    trace = ReductionTrace("classical2gl", F, A.dims, out.dims,
                           {"groups": [G.to_dict() for G in groups], "inner": inner})
    return out, trace


def classical_transport(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    sys_w = WitnessTuple(ActionKind.GENERAL, list(w.elements), list(w.groups))
    return transport(src["inner"], tgt["inner"], sys_w, family="GL")


def classical_extract(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    sys_w = extract(src["inner"], tgt["inner"], w)
    groups = [GroupSpec.from_dict(G) for G in src["groups"]]
    for G, M in zip(groups, sys_w.elements):
        if not is_member(G, M):
            raise WitnessError(f"extracted element is not in {G}")
    return WitnessTuple(ActionKind.UVW, list(sys_w.elements), groups)
