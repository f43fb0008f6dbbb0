"""Path algebras of a linear quiver and the d-way to 3-way reduction.

The quiver has vertices v_1..v_{d+1} and n_i parallel arrows x_{i,1..n_i}
from v_i to v_{i+1}. A d-way array f becomes the top-degree element
``f_hat = sum f[i_1..i_d] x_{1,i_1} ... x_{d,i_d}``, and the reduction
outputs the structure constants of ``Path(G) / (f_hat)``.

Since f_hat has maximal length, the ideal it generates is the line it spans.
Over exact fields the quotient drops the coordinate of the lex-first path in
the support of f_hat. Over R and C the top degree is instead identified with
the orthogonal complement of f_hat, through a Householder reflection that
swaps f_hat with that same pivot path; this keeps induced maps of unitary
tuples unitary.

Basis order: vertices, then paths grouped by length and then by source
stage, lex within a group.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapExceeded, InputError, ShapeError, ToleranceError, WitnessError
from .field import FieldSpec
from .groups import GroupSpec, WitnessTuple
from .reductions.common import family_of, require_forced_zero, witness
from .reductions.trace import ReductionTrace
from .tensor import ActionKind, DWayArray, apply_general_action

MAX_ORDER = 5

Path = tuple[int, tuple[int, ...]]  # (source stage, arrow indices); () for a vertex


@dataclass(frozen=True)
class Quiver:
    dims: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def vertices(self) -> list[Path]:
        return [(i, ()) for i in range(self.d + 1)]

    @property
    def arrows(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.d) for j in range(self.dims[i])]

    def groups(self) -> list[tuple[int, int]]:
        """(length, source) pairs of the nontrivial paths, in basis order."""
        return [(L, s) for L in range(1, self.d + 1) for s in range(self.d - L + 1)]

    def paths(self) -> list[Path]:
        out = list(self.vertices)
        for L, s in self.groups():
            out.extend((s, t) for t in itertools.product(*(range(n) for n in self.dims[s:s + L])))
        return out


def build_quiver(dims: Sequence[int]) -> Quiver:
    dims = tuple(int(n) for n in dims)
    if not dims or min(dims) < 1:
        raise InputError("need at least one stage and positive arrow counts")
    return Quiver(dims)


def path_count(dims: Sequence[int]) -> int:
    """Vertices plus all nontrivial paths: (d+1) + sum_{i<=j} prod n_i..n_j."""
    d = len(dims)
    return d + 1 + sum(math.prod(dims[i:j + 1]) for i in range(d) for j in range(i, d))


def label(p: Path) -> str:
    s, t = p
    if not t:
        return f"v{s + 1}"
    return "*".join(f"x{s + k + 1}_{j + 1}" for k, j in enumerate(t))


def encode_tensor_as_path_element(f: DWayArray, Q: Quiver) -> dict[Path, object]:
    """Nonzero coefficients of f_hat on the length-d paths."""
    if tuple(f.dims) != Q.dims:
        raise ShapeError(f"array dims {f.dims} do not match arrow counts {Q.dims}")
    mask = f.field.nonzero_mask(f.data)
    return {(0, tuple(int(i) for i in idx)): f.data[tuple(idx)] for idx in np.argwhere(mask)}


@dataclass(frozen=True, eq=False)
class AlgebraStructure:
    quiver: Quiver
    field: FieldSpec
    pivot: Path
    labels: tuple[str, ...]
    structure: DWayArray
    lift: np.ndarray     # quotient basis -> path space
    coords: np.ndarray   # path space -> quotient coordinates

    @property
    def dim(self) -> int:
        return len(self.labels)

    def meta(self) -> dict:
        return {"basis": list(self.labels), "pivot": label(self.pivot)}


def _top_maps(F: FieldSpec, fvec: np.ndarray, piv: int) -> tuple[np.ndarray, np.ndarray]:
    """Lift and coordinate matrices on the top-degree block."""
    k = fvec.shape[0]
    keep = [i for i in range(k) if i != piv]
    if F.exact:
        lift = F.eye(k)[:, keep]
        coords = F.eye(k)[keep, :]
        a = F.inv_scalar(fvec[piv])
        for r, q in enumerate(keep):
            coords[r, piv] = F.scalar(-a * fvec[q])
        return lift, coords
    u = fvec / np.linalg.norm(fvec)
    ph = u[piv] / abs(u[piv])
    u = u / ph
    v = u.copy()
    v[piv] -= 1.0
    H = np.eye(k, dtype=F.dtype)
    nv = np.vdot(v, v).real
    if nv > 0:
        H = H - 2.0 * np.outer(v, v.conj()) / nv
    return H[:, keep], H[keep, :]


def _product_table(Q: Quiver, index: dict[Path, int]) -> list[tuple[int, int, int]]:
    """All nonzero products of path basis elements, as (a, b, a*b) index triples."""
    out = []
    paths = list(index)
    for a, (s1, t1) in enumerate(paths):
        end = s1 + len(t1)
        for b, (s2, t2) in enumerate(paths):
            if s2 != end:
                continue
            if not t1:
                out.append((a, b, b))
            elif not t2:
                out.append((a, b, a))
            else:
                out.append((a, b, index[(s1, t1 + t2)]))
    return out


def quotient_structure(Q: Quiver, fhat: dict[Path, object], field: FieldSpec) -> AlgebraStructure:
    F = field
    if not fhat:
        raise InputError("f_hat is zero; the quotient needs a nonzero element")
    paths = Q.paths()
    index = {p: i for i, p in enumerate(paths)}
    N = len(paths)
    top = [i for i, (s, t) in enumerate(paths) if len(t) == Q.d]
    t0 = top[0]
    fvec = F.zeros(len(top))
    for p, c in fhat.items():
        fvec[index[p] - t0] = c
    piv_local = min(index[p] for p in fhat) - t0
    tl, tc = _top_maps(F, fvec, piv_local)
    lift = F.zeros((N, N - 1))
    coords = F.zeros((N - 1, N))
    lift[:t0, :t0] = F.eye(t0)
    coords[:t0, :t0] = F.eye(t0)
    lift[t0:, t0:] = tl
    coords[t0:, t0:] = tc
    full = F.zeros((N, N, N))
    one = F.scalar(1)
    for a, b, c in _product_table(Q, index):
        full[a, b, c] = one
    data = F.mode_product(lift.T.copy(), full, 0)
    data = F.mode_product(lift.T.copy(), data, 1)
    data = F.mode_product(coords, data, 2)
    pivot = paths[t0 + piv_local]
    labels = tuple(label(p) for p in paths if p != pivot)
    return AlgebraStructure(Q, F, pivot, labels, DWayArray(F, data), lift, coords)


def reduce_d_to_3(f: DWayArray, max_order: int = MAX_ORDER) -> tuple[DWayArray, ReductionTrace]:
    if f.order > max_order:
        raise CapExceeded(f"order {f.order} exceeds the cap {max_order}")
    Q = build_quiver(f.dims)
    alg = quotient_structure(Q, encode_tensor_as_path_element(f, Q), f.field)
    trace = ReductionTrace("d2three", f.field, f.dims, alg.structure.dims,
                           {"dims": list(f.dims), "f": f.data.reshape(-1).copy(), **alg.meta()})
    return alg.structure, trace


def _algebra(trace: ReductionTrace) -> AlgebraStructure:
    F = trace.field
    f = DWayArray(F, F.array(trace["f"]).reshape(trace["dims"]))
    Q = build_quiver(trace["dims"])
    return quotient_structure(Q, encode_tensor_as_path_element(f, Q), F)


def _kron_all(F: FieldSpec, mats: Sequence[np.ndarray]) -> np.ndarray:
    out = F.eye(1)
    for M in mats:
        out = F.array(np.kron(out, M))
    return out


def induced_algebra_map(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> np.ndarray:
    """Matrix of the algebra map R_f -> R_g fixing vertices and acting by P_i on stage-i arrows.

    Column a holds the image of quotient basis element a.
    """
    F = src.field
    dims = list(src["dims"])
    P = [F.array(x) for x in w.elements]
    if [x.shape[0] for x in P] != dims:
        raise ShapeError("witness does not match the arrow counts")
    Q = build_quiver(dims)
    N = path_count(dims)
    K = F.zeros((N, N))
    K[:Q.d + 1, :Q.d + 1] = F.eye(Q.d + 1)
    off = Q.d + 1
    for L, s in Q.groups():
        blk = _kron_all(F, P[s:s + L])
        k = blk.shape[0]
        K[off:off + k, off:off + k] = blk
        off += k
    A, B = _algebra(src), _algebra(tgt)
    return F.matmul(F.matmul(B.coords, K), A.lift)


def transport(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    """Tensor witness (P_1..P_d) -> algebra witness X = M^-t under the UUUstar action."""
    F = src.field
    M = induced_algebra_map(src, tgt, w)
    return witness(ActionKind.UUUstar, F, family_of(w), [F.inv_t(M)])


@dataclass(frozen=True, eq=False)
class BlockExtraction:
    blocks: list[np.ndarray]
    alpha: object
    witness: WitnessTuple | None   # None when no d-th root of alpha exists

    @property
    def up_to_scaling(self) -> bool:
        return self.witness is None


def _stage_ranges(dims: Sequence[int]) -> list[range]:
    d = len(dims)
    off = d + 1
    out = []
    for n in dims:
        out.append(range(off, off + n))
        off += n
    return out


def _root(F: FieldSpec, a, d: int):
    """Some r with r^d = a, or None."""
    if F.kind == "C":
        return abs(a) ** (1.0 / d) * cmath.exp(1j * cmath.phase(a) / d)
    if F.kind == "R":
        if a >= 0:
            return a ** (1.0 / d)
        return -((-a) ** (1.0 / d)) if d % 2 else None
    if F.kind == "Fp":
        a = int(a) % F.p
        for r in range(1, F.p):
            if pow(r, d, F.p) == a:
                return r
        return None
    a = Fraction(a)
    if a < 0 and d % 2 == 0:
        return None
    sign = -1 if a < 0 else 1
    num, den = abs(a.numerator), a.denominator
    rn, rd = round(num ** (1.0 / d)), round(den ** (1.0 / d))
    for x in (rn - 1, rn, rn + 1):
        for y in (rd - 1, rd, rd + 1):
            if x > 0 and y > 0 and x ** d == num and y ** d == den:
                return sign * Fraction(x, y)
    return None


def extract_diag_blocks(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> BlockExtraction:
    """Arrow blocks of an algebra isomorphism, rescaled by the d-th root of 1/alpha."""
    F = src.field
    dims = list(src["dims"])
    d = len(dims)
    if w.action is not ActionKind.UUUstar:
        raise WitnessError("expected a UUUstar witness")
    M = F.inv_t(F.array(w.elements[0]))
    stages = _stage_ranges(dims)
    arrows = range(d + 1, d + 1 + sum(dims))
    require_forced_zero(F, M, range(0, d + 1), arrows, "vertex part of arrow images")
    for i in range(d):
        for j in range(i + 1, d):
            require_forced_zero(F, M, stages[i], stages[j], f"stage {i + 1} part of stage {j + 1} images")
    blocks = [M[np.ix_(list(r), list(r))].copy() for r in stages]
    f = DWayArray(F, F.array(src["f"]).reshape(dims))
    g = DWayArray(F, F.array(tgt["f"]).reshape(dims))
    image = apply_general_action(blocks, f, check=False)
    k = tuple(np.argwhere(F.nonzero_mask(g.data))[0])
    if F.exact:
        alpha = F.scalar(image.data[k] * F.inv_scalar(g.data[k]))
        if F.kind == "Fp":
            alpha = int(alpha) % F.p
    else:
        alpha = complex(np.vdot(g.data.ravel(), image.data.ravel()) / np.vdot(g.data.ravel(), g.data.ravel()))
        if F.kind == "R":
            alpha = alpha.real
    if image != g.scale(alpha):
        raise WitnessError("arrow blocks do not map f onto a multiple of g")
    if F.is_float and family_of(w) in ("O", "U") and abs(abs(alpha) - 1.0) > 1e-6:
        raise ToleranceError(f"|alpha| = {abs(alpha):.6g} differs from 1 for a unitary witness")
    r = _root(F, alpha, d)
    if r is None:
        return BlockExtraction(blocks, alpha, None)
    c = F.inv_scalar(r) if F.exact else 1.0 / r
    scaled = [F.scale(c, P) for P in blocks]
    fam = family_of(w)
    return BlockExtraction(blocks, alpha, WitnessTuple(ActionKind.GENERAL, scaled,
                                                       [GroupSpec(fam, n, F) for n in dims]))


def extract(src: ReductionTrace, tgt: ReductionTrace, w: WitnessTuple) -> WitnessTuple:
    res = extract_diag_blocks(src, tgt, w)
    if res.witness is None:
        raise WitnessError(f"isomorphic up to scaling: alpha = {res.alpha} has no {len(src['dims'])}-th root")
    return res.witness
