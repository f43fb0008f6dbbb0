"""Dense d-way arrays and the multilinear group actions on them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import FieldMismatch, InputError, ShapeError, SingularError
from .field import FieldSpec


class ActionKind(str, Enum):
    """The five actions on 3-way arrays, plus the plain product action."""

    UVW = "UVW"
    UUV = "UUV"
    UUstarV = "UUstarV"
    UUUstar = "UUUstar"
    UUU = "UUU"
    GENERAL = "GENERAL"

    @property
    def arity(self) -> int | None:
        """Number of independent group elements, None for GENERAL."""
        return {"UVW": 3, "UUV": 2, "UUstarV": 2, "UUUstar": 1, "UUU": 1}.get(self.value)

    @classmethod
    def parse(cls, text: str) -> "ActionKind":
        for k in cls:
            if k.value.lower() == text.lower():
                return k
        raise InputError(f"unknown action {text!r}")


@dataclass(frozen=True, eq=False)
class DWayArray:
    field: FieldSpec
    data: np.ndarray

    def __post_init__(self) -> None:
        data = self.field.array(self.data)
        if data.ndim < 1 or any(n < 1 for n in data.shape):
            raise ShapeError(f"dims must be positive, got {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.data.shape)

    @property
    def order(self) -> int:
        return self.data.ndim

    @classmethod
    def zeros(cls, field: FieldSpec, dims: Sequence[int]) -> "DWayArray":
        return cls(field, field.zeros(tuple(dims)))

    @classmethod
    def random(cls, field: FieldSpec, dims: Sequence[int], rng: np.random.Generator,
               density: float = 1.0) -> "DWayArray":
        return cls(field, field.random(tuple(dims), rng, density))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DWayArray):
            return NotImplemented
        return self.field == other.field and self.field.equal(self.data, other.data)

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "DWayArray") -> "DWayArray":
        _same_field(self, other)
        return DWayArray(self.field, self.field.add(self.data, other.data))

    def __sub__(self, other: "DWayArray") -> "DWayArray":
        _same_field(self, other)
        return DWayArray(self.field, self.field.sub(self.data, other.data))

    def scale(self, c) -> "DWayArray":
        return DWayArray(self.field, self.field.scale(c, self.data))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.data)

    def __repr__(self) -> str:
        return f"DWayArray({self.field}, dims={self.dims})"

    # -- canonical JSON -------------------------------------------------

    def to_dict(self, meta: dict | None = None) -> dict:
        F = self.field
        nz = np.argwhere(self.data != 0) if F.kind != "Q" else [
            idx for idx in np.ndindex(*self.dims) if self.data[idx] != 0]
        entries = [[int(i) for i in idx] + [F.render(self.data[tuple(idx)])] for idx in nz]
        entries.sort(key=lambda e: e[:-1])
        out = {"field": F.to_dict(), "dims": list(self.dims), "entries": entries}
        if meta:
            out["meta"] = meta
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "DWayArray":
        try:
            F = FieldSpec.from_dict(d["field"])
            dims = tuple(int(n) for n in d["dims"])
            entries = d["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed tensor document: {exc}") from exc
        data = F.zeros(dims)
        for e in entries:
            if len(e) != len(dims) + 1:
                raise InputError(f"entry {e!r} does not match dims {dims}")
            idx = tuple(int(i) for i in e[:-1])
            if any(not 0 <= i < n for i, n in zip(idx, dims)):
                raise InputError(f"entry index {idx} out of range")
            data[idx] = F.parse(e[-1])
        return cls(F, data)

    def to_json(self, meta: dict | None = None) -> str:
        return json.dumps(self.to_dict(meta), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "DWayArray":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc


def _same_field(*arrays: DWayArray) -> FieldSpec:
    F = arrays[0].field
    for a in arrays[1:]:
        if a.field != F:
            raise FieldMismatch(f"{a.field} vs {F}")
    return F


def _check_square(F: FieldSpec, g: np.ndarray, n: int, which: str) -> np.ndarray:
    g = F.array(g)
    if g.shape != (n, n):
        raise ShapeError(f"{which}: expected {n}x{n}, got {g.shape}")
    if F.rank(g) < n:
        raise SingularError(f"{which} is singular")
    return g


def apply_general_action(g: Sequence[np.ndarray], A: DWayArray, check: bool = True) -> DWayArray:
    """b[i1..id] = sum a[j1..jd] g1[i1,j1] ... gd[id,jd]."""
    if len(g) != A.order:
        raise ShapeError(f"{len(g)} factors for an order-{A.order} array")
    F = A.field
    data = A.data
    for axis, gk in enumerate(g):
        gk = _check_square(F, gk, A.dims[axis], f"factor {axis}") if check else gk
        data = F.mode_product(gk, data, axis)
    return DWayArray(F, data)


def expand_action(kind: ActionKind, g: Sequence[np.ndarray], F: FieldSpec,
                  dims: Sequence[int] | None = None) -> list[np.ndarray]:
    """Rewrite the independent elements of a five-action as one factor per axis."""
    kind = ActionKind(kind)
    if kind is ActionKind.GENERAL:
        return [F.array(x) for x in g]
    if len(g) != kind.arity:
        raise ShapeError(f"{kind.value} takes {kind.arity} elements, got {len(g)}")
    g = [F.array(x) for x in g]
    for x in g:
        if x.ndim != 2 or x.shape[0] != x.shape[1]:
            raise ShapeError(f"group elements must be square, got {x.shape}")
    if kind is ActionKind.UVW:
        factors = list(g)
    elif kind is ActionKind.UUV:
        factors = [g[0], g[0], g[1]]
    elif kind is ActionKind.UUstarV:
        factors = [g[0], F.inv_t(g[0]), g[1]]
    elif kind is ActionKind.UUUstar:
        factors = [g[0], g[0], F.inv_t(g[0])]
    else:
        factors = [g[0], g[0], g[0]]
    if dims is not None and tuple(f.shape[0] for f in factors) != tuple(dims):
        raise ShapeError(f"{kind.value} element sizes {[f.shape[0] for f in factors]} "
                         f"do not match dims {tuple(dims)}")
    return factors


def apply_five_action(kind: ActionKind, g: Sequence[np.ndarray], A: DWayArray) -> DWayArray:
    kind = ActionKind(kind)
    if kind is not ActionKind.GENERAL and A.order != 3:
        raise ShapeError(f"{kind.value} acts on 3-way arrays, got order {A.order}")
    factors = expand_action(kind, g, A.field, A.dims)
    return apply_general_action(factors, A)


def compose(kind: ActionKind, g: Sequence[np.ndarray], h: Sequence[np.ndarray],
            F: FieldSpec) -> list[np.ndarray]:
    """Elementwise product g*h, so that acting by it equals acting by h then g."""
    return [F.matmul(F.array(a), F.array(b)) for a, b in zip(g, h)]


def slice_(A: DWayArray, direction: int, k: int) -> np.ndarray:
    """The k-th slice along ``direction``; frontal slices are direction 2."""
    if A.order != 3:
        raise ShapeError("slices are defined for 3-way arrays")
    if direction not in (0, 1, 2):
        raise InputError(f"direction must be 0, 1 or 2, got {direction}")
    if not 0 <= k < A.dims[direction]:
        raise InputError(f"slice index {k} out of range for dims {A.dims}")
    return np.take(A.data, k, axis=direction).copy()


def frontal_slices(A: DWayArray) -> list[np.ndarray]:
    return [slice_(A, 2, k) for k in range(A.dims[2])]


def from_slices(field: FieldSpec, slices: Iterable[np.ndarray], direction: int = 2) -> DWayArray:
    """Stack matrices as the slices of a 3-way array along ``direction``."""
    mats = [field.array(s) for s in slices]
    if not mats:
        raise ShapeError("need at least one slice")
    return DWayArray(field, np.stack(mats, axis=direction))


def flatten(A: DWayArray, direction: int) -> np.ndarray:
    """Matrix with ``direction`` as rows and the other indices lex-flattened."""
    if not 0 <= direction < A.order:
        raise InputError(f"direction {direction} out of range")
    return np.moveaxis(A.data, direction, 0).reshape(A.dims[direction], -1).copy()


def unflatten(F: FieldSpec, M: np.ndarray, dims: Sequence[int], direction: int) -> DWayArray:
    rest = [n for i, n in enumerate(dims) if i != direction]
    data = np.asarray(M).reshape([dims[direction]] + rest)
    return DWayArray(F, np.moveaxis(data, 0, direction))


def permute_directions(A: DWayArray, perm: Sequence[int]) -> DWayArray:
    """New array whose axis t is axis perm[t] of A."""
    perm = list(perm)
    if sorted(perm) != list(range(A.order)):
        raise InputError(f"{perm} is not a permutation of {A.order} directions")
    return DWayArray(A.field, np.transpose(A.data, perm))


def inverse_permutation(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for t, s in enumerate(perm):
        inv[s] = t
    return inv
