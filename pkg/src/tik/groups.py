"""Matrix groups: membership, sampling, enumeration and witness checking."""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceeded, FieldMismatch, InputError, ShapeError, UnsupportedError, WitnessError
from .field import FieldSpec
from .tensor import ActionKind, DWayArray, apply_general_action, expand_action

FAMILIES = ("Sym", "GL", "O", "U", "Sp")
DEFAULT_CAP = 10**8


def enumeration_cap() -> int:
    env = os.environ.get("TIK_CAP")
    if env:
        try:
            return int(float(env))
        except ValueError as exc:
            raise InputError(f"TIK_CAP must be numeric, got {env!r}") from exc
    return DEFAULT_CAP


def standard_skew_form(F: FieldSpec, n: int) -> np.ndarray:
    """The anti-diagonal skew form with +1 above and -1 below the anti-diagonal."""
    if n % 2:
        raise InputError("symplectic forms need even degree")
    h = n // 2
    J = F.zeros((n, n))
    one = F.scalar(1)
    for i in range(h):
        J[i, n - 1 - i] = one
        J[h + i, h - 1 - i] = F.neg(np.asarray([one]))[0] if F.kind == "Fp" else -one
    return J


@dataclass(frozen=True, eq=False)
class GroupSpec:
    family: str
    n: int
    field: FieldSpec
    form: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise InputError(f"unknown group family {self.family!r}")
        if self.n < 1:
            raise InputError("degree must be positive")
        F = self.field
        if self.family == "U" and F.kind != "C":
            raise InputError("unitary groups need the complex field")
        if self.family == "O" and F.kind not in ("R", "Fp", "Q"):
            raise InputError("orthogonal groups need R, Q or a prime field")
        if self.family == "Sp" and self.n % 2:
            raise InputError("symplectic groups need even degree")
        form = self.form
        if form is None and self.family in ("O", "U"):
            form = F.eye(self.n)
        elif form is None and self.family == "Sp":
            form = standard_skew_form(F, self.n)
        if form is not None:
            form = F.array(form)
            if form.shape != (self.n, self.n) or F.rank(form) < self.n:
                raise InputError("form must be a full-rank n x n matrix")
            if self.family == "Sp" and not F.equal(form.T, F.neg(form)):
                raise InputError("symplectic form must be skew-symmetric")
            form.setflags(write=False)
        object.__setattr__(self, "form", form)

    @property
    def standard_form(self) -> bool:
        if self.family in ("Sym", "GL"):
            return True
        ref = self.field.eye(self.n) if self.family in ("O", "U") else standard_skew_form(self.field, self.n)
        return self.field.equal(self.form, ref)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupSpec):
            return NotImplemented
        if (self.family, self.n, self.field) != (other.family, other.n, other.field):
            return False
        if self.form is None or other.form is None:
            return self.form is other.form
        return self.field.equal(self.form, other.form)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"{self.family}({self.n}, {self.field})"

    def with_n(self, n: int) -> "GroupSpec":
        return GroupSpec(self.family, n, self.field)

    def to_dict(self) -> dict:
        out: dict = {"family": self.family, "n": self.n, "field": self.field.to_dict()}
        if self.form is not None:
            out["form"] = "identity" if self.family != "Sp" and self.standard_form else (
                "standard" if self.standard_form else
                [[self.field.render(v) for v in row] for row in self.form])
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "GroupSpec":
        try:
            F = FieldSpec.from_dict(d["field"])
            form = d.get("form")
            if isinstance(form, str):
                if form not in ("identity", "standard"):
                    raise InputError(f"unknown form name {form!r}")
                form = None
            elif form is not None:
                form = F.array([[F.parse(v) for v in row] for row in form])
            return cls(d["family"], int(d["n"]), F, form)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed group document {d!r}") from exc


# -- membership -------------------------------------------------------------

def is_member(G: GroupSpec, M: np.ndarray) -> bool:
    F = G.field
    M = np.asarray(M)
    if M.shape != (G.n, G.n):
        raise ShapeError(f"expected {G.n}x{G.n} matrix, got {M.shape}")
    if F.kind == "R" and np.iscomplexobj(M):
        raise FieldMismatch("complex matrix for a real group")
    M = F.array(M)
    if G.family == "Sym":
        return _is_permutation(F, M)
    if F.rank(M) < G.n:
        return False
    if G.family == "GL":
        return True
    Mt = F.ct(M) if G.family == "U" else M.T
    return F.equal(F.matmul(F.matmul(Mt, G.form), M), G.form)


def _is_permutation(F: FieldSpec, M: np.ndarray) -> bool:
    n = M.shape[0]
    if F.exact:
        vals = [(int(v) if F.kind == "Fp" else v) for v in M.flat]
        if any(v not in (0, 1) for v in vals):
            return False
        B = np.array([v == 1 for v in vals]).reshape(n, n)
    else:
        ones = np.abs(M - 1) <= F.tol
        zeros = np.abs(M) <= F.tol
        if not np.all(ones | zeros):
            return False
        B = ones
    return bool(np.all(B.sum(axis=0) == 1) and np.all(B.sum(axis=1) == 1))


def assert_block_diagonal(F: FieldSpec, M: np.ndarray, sizes: Sequence[int],
                          tol: float | None = None) -> list[np.ndarray]:
    """Check that M is block diagonal for the partition ``sizes``; return the blocks.

    Over floats the threshold is ``tol`` times the operator norm of M
    (default 1e-6).
    """
    if sum(sizes) != M.shape[0] or M.shape[0] != M.shape[1]:
        raise ShapeError(f"partition {list(sizes)} does not fit {M.shape}")
    offs = np.cumsum([0] + list(sizes))
    mask = np.ones(M.shape, dtype=bool)
    for a, b in zip(offs[:-1], offs[1:]):
        mask[a:b, a:b] = False
    off = np.where(mask, M, F.zeros(M.shape))
    if F.exact:
        ok = F.is_zero(off)
        worst = 0.0
    else:
        thr = (1e-6 if tol is None else tol) * max(1.0, float(np.linalg.norm(M, 2)))
        worst = float(np.max(np.abs(off))) if off.size else 0.0
        ok = worst <= thr
    if not ok:
        raise WitnessError(f"off-diagonal blocks do not vanish (max {worst:.3g})")
    return [M[a:b, a:b].copy() for a, b in zip(offs[:-1], offs[1:])]


# -- enumeration -------------------------------------------------------------

def enumerate_group(G: GroupSpec) -> Iterator[np.ndarray]:
    """Every member once, in lexicographic order of the row-major entry vector."""
    F = G.field
    if G.family == "Sym":
        if math.factorial(G.n) > enumeration_cap():
            raise CapExceeded(f"{G.n}! exceeds the enumeration cap")
        for M in _permutation_matrices(G.n):
            yield F.array(M)
        return
    if F.kind != "Fp":
        raise UnsupportedError("enumeration needs a prime field")
    if G.family == "U":
        raise UnsupportedError("unitary groups are not enumerable")
    if F.p ** (G.n * G.n) > enumeration_cap():
        raise CapExceeded(f"{F.p}^{G.n * G.n} candidates exceed the enumeration cap")
    yield from (M.copy() for M in _enumerate_cached(G.family, G.n, F.p, _form_key(G)))


def _form_key(G: GroupSpec):
    return None if G.form is None else tuple(int(v) for v in G.form.flat)


def _permutation_matrices(n: int) -> list[np.ndarray]:
    mats = []
    for perm in itertools.permutations(range(n)):
        M = np.zeros((n, n), dtype=np.int64)
        M[range(n), perm] = 1
        mats.append(M)
    mats.sort(key=lambda M: tuple(M.flat))
    return mats


@lru_cache(maxsize=64)
def _enumerate_cached(family: str, n: int, p: int, form_key) -> tuple[np.ndarray, ...]:
    F = FieldSpec.Fp(p)
    vecs = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
    if form_key is not None:
        # rows of M satisfy M Psi M^t = Psi with Psi the inverse form
        Psi = F.inv(np.array(form_key, dtype=np.int64).reshape(n, n))
        VP = F.matmul(vecs, Psi)
        diag_vals = np.mod(np.mod(VP * vecs, p).sum(axis=1), p)
    out: list[np.ndarray] = []
    rows: list[int] = []

    def candidates(i: int) -> np.ndarray:
        idx = np.arange(1, len(vecs))
        if form_key is not None:
            idx = idx[diag_vals[idx] == int(Psi[i, i])]
            for j, rj in enumerate(rows):
                pair = np.mod(np.mod(VP[idx] * vecs[rj], p).sum(axis=1), p)
                idx = idx[pair == int(Psi[i, j])]
        return idx

    def rec(i: int) -> None:
        for ci in candidates(i):
            if i and F.rank(vecs[rows + [int(ci)]]) <= i:
                continue
            rows.append(int(ci))
            if i + 1 == n:
                out.append(vecs[rows].copy())
            else:
                rec(i + 1)
            rows.pop()

    rec(0)
    for M in out:
        M.setflags(write=False)
    return tuple(out)


def group_order(G: GroupSpec) -> int:
    return sum(1 for _ in enumerate_group(G))


# -- sampling ---------------------------------------------------------------

_UNIFORM_LIMIT = 10**6


def sample(G: GroupSpec, seed: int) -> np.ndarray:
    """A member of G, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    F = G.field
    n = G.n
    if G.family == "Sym":
        return F.array(np.eye(n, dtype=np.int64)[rng.permutation(n)])
    if G.family == "GL":
        while True:
            M = F.random((n, n), rng)
            if F.rank(M) == n:
                return M
    if G.family in ("O", "U") and F.is_float:
        return _haar(F, n, rng, G.form)
    if F.kind == "Fp" and G.family in ("O", "Sp"):
        if F.p ** (n * n) <= _UNIFORM_LIMIT:
            members = _enumerate_cached(G.family, n, F.p, _form_key(G))
            return members[int(rng.integers(len(members)))].copy()
        if G.family == "O":
            return _reflection_product(F, G.form, rng)
        return _transvection_product(F, G.form, rng)
    raise UnsupportedError(f"sampling {G} is not supported")


def _haar(F: FieldSpec, n: int, rng: np.random.Generator, form: np.ndarray) -> np.ndarray:
    if not F.equal(form, np.eye(n)):
        raise UnsupportedError("float sampling supports the identity form only")
    Z = F.random((n, n), rng)
    Qm, Rm = np.linalg.qr(Z)
    d = np.diagonal(Rm)
    phase = d / np.abs(d)
    return F.array(Qm * phase)


def _reflection_product(F: FieldSpec, form: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Product of random reflections; spans O(Phi) up to the spinor-norm subtleties."""
    n = form.shape[0]
    p = F.p
    M = F.eye(n)
    count = 0
    while count < 2 * n + 1:
        v = rng.integers(0, p, size=n, dtype=np.int64)
        Phv = F.matmul(form, v[:, None])[:, 0]
        q = int(F.matmul(v[None, :], Phv[:, None])[0, 0])
        if q == 0:
            continue
        S = F.sub(F.eye(n), F.scale(2 * pow(q, -1, p), np.outer(v, Phv) % p))
        M = F.matmul(S, M)
        count += 1
    return M


def _transvection_product(F: FieldSpec, form: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = form.shape[0]
    M = F.eye(n)
    for _ in range(4 * n):
        v = rng.integers(0, F.p, size=n, dtype=np.int64)
        c = int(rng.integers(1, F.p))
        # x -> x + c * omega(x, v) v with omega(x, v) = x^t J v
        T = F.add(F.eye(n), F.scale(c, np.outer(v, F.matmul(form, v[:, None])[:, 0]) % F.p))
        M = F.matmul(T, M)
    return M


# -- witnesses --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WitnessTuple:
    action: ActionKind
    elements: list[np.ndarray]
    groups: list[GroupSpec] = dc_field(default_factory=list)

    def __post_init__(self) -> None:
        kind = ActionKind(self.action)
        object.__setattr__(self, "action", kind)
        if kind.arity is not None and len(self.elements) != kind.arity:
            raise ShapeError(f"{kind.value} needs {kind.arity} elements, got {len(self.elements)}")
        if self.groups and len(self.groups) != len(self.elements):
            raise ShapeError("one group per element required")
        if self.groups:
            els = [g.field.array(e) for g, e in zip(self.groups, self.elements)]
            object.__setattr__(self, "elements", els)

    @property
    def field(self) -> FieldSpec:
        return self.groups[0].field

    def equals(self, other: "WitnessTuple", tol: float | None = None) -> bool:
        if self.action != other.action or len(self.elements) != len(other.elements):
            return False
        F = self.field
        for a, b in zip(self.elements, other.elements):
            if a.shape != b.shape:
                return False
            if F.exact:
                if not F.equal(a, b):
                    return False
            elif np.max(np.abs(a - b), initial=0.0) > (tol if tol is not None else F.tol) * max(1.0, F.maxabs(a)):
                return False
        return True

    def to_dict(self) -> dict:
        F = self.field
        return {
            "action": self.action.value,
            "elements": [[[F.render(v) for v in row] for row in M] for M in self.elements],
            "groups": [g.to_dict() for g in self.groups],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WitnessTuple":
        try:
            groups = [GroupSpec.from_dict(g) for g in d["groups"]]
            els = [g.field.array([[g.field.parse(v) for v in row] for row in M])
                   for g, M in zip(groups, d["elements"])]
            return cls(ActionKind.parse(d["action"]), els, groups)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed witness document: {exc}") from exc


def identity_witness(kind: ActionKind, groups: Sequence[GroupSpec]) -> WitnessTuple:
    return WitnessTuple(kind, [G.field.eye(G.n) for G in groups], list(groups))


def check_witness(w: WitnessTuple, A: DWayArray, B: DWayArray) -> bool:
    if A.dims != B.dims:
        return False
    F = A.field
    if B.field != F:
        raise FieldMismatch("A and B live over different fields")
    for G, M in zip(w.groups, w.elements):
        if G.field != F:
            raise FieldMismatch(f"group {G} is not over {F}")
        if not is_member(G, M):
            return False
    factors = expand_action(w.action, w.elements, F, A.dims)
    if any(F.rank(f) < f.shape[0] for f in factors):
        return False
    return apply_general_action(factors, A, check=False) == B
