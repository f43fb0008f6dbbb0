"""The acceptance suite, shared by ``tik selftest`` and the test suite.

Each criterion returns a :class:`Result`; ``quick=True`` shrinks the sample
counts so the whole suite runs in seconds.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import pathalg, polysys
from .errors import TikError, WitnessError
from .field import FieldSpec
from .groups import GroupSpec, WitnessTuple, check_witness, sample
from .oracle import brute_force_isomorphic, flattening_invariant, singular_spectrum
from .reductions import REGISTRY, conj, graph, skew, system
from .tensor import ActionKind, DWayArray, apply_five_action, apply_general_action, compose, flatten

F2, F3, F5, F7 = (FieldSpec.Fp(p) for p in (2, 3, 5, 7))
R, C = FieldSpec.R(), FieldSpec.C()


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number} [{status}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _unitary_family(F: FieldSpec) -> str:
    return "U" if F.kind == "C" else "O"


def _groups(F: FieldSpec, family: str, sizes) -> list[GroupSpec]:
    return [GroupSpec(family, n, F) for n in sizes]


# -- 1 ------------------------------------------------------------------------

_KIND_SIZES = {
    ActionKind.UVW: lambda n: (n, n + 1, n),
    ActionKind.UUV: lambda n: (n, n + 1),
    ActionKind.UUstarV: lambda n: (n, n + 1),
    ActionKind.UUUstar: lambda n: (n,),
    ActionKind.UUU: lambda n: (n,),
}


def _dims_for(kind: ActionKind, sizes) -> tuple[int, int, int]:
    if kind is ActionKind.UVW:
        return tuple(sizes)
    if kind in (ActionKind.UUV, ActionKind.UUstarV):
        return (sizes[0], sizes[0], sizes[1])
    return (sizes[0],) * 3


def criterion_1(quick: bool = False) -> Result:
    count = 50 if quick else 500
    failures = 0
    kinds = list(_KIND_SIZES)
    for F in (F5, C):
        fam = "GL"
        for t in range(count):
            rng = np.random.default_rng(t)
            kind = kinds[t % len(kinds)]
            sizes = _KIND_SIZES[kind](2 + t % 2)
            A = DWayArray(F, F.random(_dims_for(kind, sizes), rng))
            B = DWayArray(F, F.random(_dims_for(kind, sizes), rng))
            g = [sample(G, 2 * t) for G in _groups(F, fam, sizes)]
            h = [sample(G, 2 * t + 1) for G in _groups(F, fam, sizes)]
            a, b = F.scalar(int(rng.integers(1, 4))), F.scalar(int(rng.integers(1, 4)))
            ok = apply_five_action(kind, g, apply_five_action(kind, h, A)) == \
                apply_five_action(kind, compose(kind, g, h, F), A)
            ok &= apply_five_action(kind, [F.eye(n) for n in sizes], A) == A
            lhs = apply_five_action(kind, g, A.scale(a) + B.scale(b))
            rhs = apply_five_action(kind, g, A).scale(a) + apply_five_action(kind, g, B).scale(b)
            ok &= lhs == rhs
            failures += not ok
    total = 2 * count
    return Result(1, "action laws", failures == 0, f"{total - failures}/{total} instances over F_5 and C")


# -- 2 ------------------------------------------------------------------------

def criterion_2(quick: bool = False) -> Result:
    graphs = list(graph.all_digraphs(3, [2, 3, 4]))
    if quick:
        graphs = graphs[::5]
    disagree = checked = 0
    for G, H in itertools.product(graphs, repeat=2):
        truth = graph.graph_isomorphism(G, H) is not None
        m = len(G.arcs)
        for F, fam in ((F2, "GL"), (F3, "O")):
            A, _ = graph.graph_to_tensor(G, F)
            B, _ = graph.graph_to_tensor(H, F)
            if A.dims != B.dims:
                found = False
            else:
                found = brute_force_isomorphic(ActionKind.UUV, _groups(F, fam, (3, m)), A, B) is not None
            checked += 1
            disagree += found != truth
    return Result(2, "graph reduction equivalence", disagree == 0,
                  f"{len(graphs)} digraphs, {checked} oracle calls, {disagree} disagreements")


# -- 3 ------------------------------------------------------------------------

def criterion_3(quick: bool = False) -> Result:
    problems = []
    rng = np.random.default_rng(0)
    out, _ = skew.reduce(DWayArray(R, R.random((2, 2, 2), rng)))
    if out.dims != (15, 15, 24):
        problems.append(f"uvw2vvw {out.dims}")
    for l, m, n in [(2, 2, 2), (2, 3, 2), (3, 2, 4)]:
        A = DWayArray(R, R.random((l, m, n), rng))
        if conj.reduce(A)[0].dims != (l + m, l + m, n):
            problems.append(f"uvw2conj {(l, m, n)}")
        out, _ = skew.reduce(A)
        lo, hi = min(l, m), max(l, m)
        if out.dims != (lo + 5 * hi + 3,) * 2 + (n + lo * (hi + 1) + hi * (3 * hi + 2),):
            problems.append(f"uvw2vvw {(l, m, n)}")
    for l, m in [(2, 2), (3, 2), (2, 3)]:
        A = DWayArray(R, R.random((l, l, m), rng))
        for rid in ("vvw2alg", "vvw2cubic"):
            if REGISTRY[rid].reduce(A)[0].dims != (l + m,) * 3:
                problems.append(f"{rid} {(l, m)}")
    audited = 0
    for d in range(1, 5):
        for dims in itertools.product(range(1, 4), repeat=d):
            if quick and d == 4 and max(dims) > 2:
                continue
            Q = pathalg.build_quiver(dims)
            if len(Q.paths()) != pathalg.path_count(dims):
                problems.append(f"path enumeration {dims}")
            f = DWayArray(F3, F3.random(dims, np.random.default_rng(audited)))
            if F3.is_zero(f.data):
                f = DWayArray(F3, F3.array(np.ones(dims, dtype=np.int64)))
            if pathalg.reduce_d_to_3(f)[0].dims[0] != pathalg.path_count(dims) - 1:
                problems.append(f"algebra dim {dims}")
            audited += 1
    detail = f"{audited} path-algebra shapes audited" + (f"; mismatches: {problems}" if problems else "")
    return Result(3, "dimension formulas", not problems, detail)


# -- 4 ------------------------------------------------------------------------

@dataclass
class _Case:
    A: object
    B: object
    w: WitnessTuple
    reduce: Callable


def _planted_uvw(F: FieldSpec, dims, seed: int, fam: str, require: Callable | None = None):
    rng = np.random.default_rng(seed)
    while True:
        A = DWayArray(F, F.random(dims, rng))
        if require is None or require(A):
            break
    gs = _groups(F, fam, dims)
    w = WitnessTuple(ActionKind.UVW, [sample(G, seed * 7 + i) for i, G in enumerate(gs)], gs)
    return A, apply_five_action(ActionKind.UVW, w.elements, A), w


def _independent_slices(A: DWayArray) -> bool:
    return A.field.rank(flatten(A, 2)) == A.dims[2]


def _case(rid: str, F: FieldSpec, seed: int) -> _Case:
    fam = "GL" if F.kind == "Fp" else _unitary_family(F)
    red = REGISTRY[rid].reduce
    if rid == "uvw2vvw":
        dims = [(2, 2, 2), (1, 2, 2), (3, 2, 1)][seed % 3]
        A, B, w = _planted_uvw(F, dims, seed, "O" if F.kind == "Fp" else fam)
        return _Case(A, B, w, red)
    if rid == "compress":
        A, B, w = _planted_uvw(F, [(2, 2, 2), (2, 3, 3)][seed % 2], seed, fam)
        return _Case(A, B, w, red)
    if rid == "uvw2conj":
        A, B, w = _planted_uvw(F, [(2, 3, 2), (2, 2, 3)][seed % 2], seed, fam, conj.is_nondegenerate)
        return _Case(A, B, w, red)
    if rid in ("vvw2alg", "vvw2cubic"):
        rng = np.random.default_rng(seed)
        l, m = [(2, 2), (3, 2)][seed % 2]
        while True:
            A = DWayArray(F, F.random((l, l, m), rng))
            if _independent_slices(A):
                break
        gs = _groups(F, fam, (l, m))
        w = WitnessTuple(ActionKind.UUV, [sample(G, seed * 5 + i) for i, G in enumerate(gs)], gs)
        return _Case(A, apply_five_action(ActionKind.UUV, w.elements, A), w, red)
    if rid == "d2three":
        rng = np.random.default_rng(seed)
        dims = [(2, 2, 2), (2, 1, 2, 2), (1, 2, 2)][seed % 3]
        f = DWayArray(F, F.random(dims, rng))
        gs = _groups(F, fam, dims)
        w = WitnessTuple(ActionKind.GENERAL, [sample(G, seed * 11 + i) for i, G in enumerate(gs)], gs)
        return _Case(f, apply_general_action(w.elements, f), w, red)
    if rid == "classical2gl":
        dims = [(1, 1, 1), (2, 1, 1), (1, 1, 2)][seed % 3]
        A, B, w = _planted_uvw(F, dims, seed, "O")
        gs = list(w.groups)
        return _Case(A, B, w, lambda X: system.reduce_classical_to_gl(X, gs))
    if rid == "graph3":
        rng = np.random.default_rng(seed)
        arcs = [(i, j) for i in range(3) for j in range(3) if i != j]
        k = 2 + seed % 3
        G = graph.Digraph(3, tuple(arcs[i] for i in sorted(rng.choice(len(arcs), k, replace=False))))
        sigma = [int(x) for x in rng.permutation(3)]
        return _Case(G, G.relabel(sigma), graph.graph_witness(F2, sigma),
                     lambda X: graph.graph_to_tensor(X, F2))
    if rid == "plainify":
        kind = [ActionKind.UUV, ActionKind.UUstarV, ActionKind.UUUstar, ActionKind.UUU][seed % 4]
        rng = np.random.default_rng(seed)
        sizes = (1, 2) if kind in (ActionKind.UUV, ActionKind.UUstarV) else (2,)
        A = DWayArray(F, F.random(_dims_for(kind, sizes), rng))
        gs = _groups(F, "O" if F.kind == "Fp" else fam, sizes)
        els = [sample(G, seed * 3 + i) for i, G in enumerate(gs)]
        B = apply_five_action(kind, els, A)
        S, T = system.encode_action_system(A, kind), system.encode_action_system(B, kind)
        return _Case(S, T, WitnessTuple(ActionKind.GENERAL, els, gs), system.fgs_plainify)
    raise KeyError(rid)


ROUND_TRIP_FIELDS = {
    "graph3": (F2,),
    "classical2gl": (F3,),
    "compress": (R, C),
}


def round_trip(rid: str, F: FieldSpec, seed: int) -> str | None:
    """None on success, else a short reason."""
    case = _case(rid, F, seed)
    ra, ta = case.reduce(case.A)
    rb, tb = case.reduce(case.B)
    red = REGISTRY[rid]
    try:
        w2 = red.transport(ta, tb, case.w)
    except TikError as exc:
        return f"transport raised {exc}"
    if not check_witness(w2, ra, rb):
        return "transported witness fails the check"
    try:
        back = red.extract(ta, tb, w2)
    except TikError as exc:
        return f"extract raised {exc}"
    if not back.equals(case.w, 1e-7):
        return "extract(transport(w)) differs from w"
    return None


def criterion_4(quick: bool = False) -> Result:
    per = 20 if quick else 200
    fails: dict[str, int] = {}
    for rid in REGISTRY:
        fields = ROUND_TRIP_FIELDS.get(rid, (R, C, F3))
        bad = 0
        for s in range(per):
            F = fields[s % len(fields)]
            if round_trip(rid, F, s) is not None:
                bad += 1
        fails[rid] = bad
    total = per * len(REGISTRY)
    nbad = sum(fails.values())
    detail = f"{total - nbad}/{total} planted round trips"
    if nbad:
        detail += " " + str({k: v for k, v in fails.items() if v})
    return Result(4, "witness round trips", nbad == 0, detail)


# -- 5 ------------------------------------------------------------------------

def _rejects(fn: Callable) -> bool:
    try:
        fn()
    except WitnessError:
        return True
    return False


def forced_block_rejections() -> list[str]:
    """Perturb transported witnesses off their forced zero blocks; every extraction must refuse."""
    failures = []
    for rid, F, seed in (("uvw2vvw", R, 0), ("uvw2vvw", F3, 0), ("uvw2conj", C, 1), ("vvw2alg", R, 0),
                         ("vvw2cubic", F3, 1), ("classical2gl", F3, 1), ("plainify", R, 0),
                         ("d2three", C, 0)):
        case = _case(rid, F, seed)
        ta = case.reduce(case.A)[1]
        tb = case.reduce(case.B)[1]
        red = REGISTRY[rid]
        w2 = red.transport(ta, tb, case.w)
        els = [x.copy() for x in w2.elements]
        X = els[0]
        if rid == "uvw2vvw":
            X[X.shape[0] - 1, 0] = F.scalar(1)   # U leaking into a gadget coordinate
        elif rid in ("uvw2conj", "vvw2alg"):
            X[X.shape[0] - 1, 0] = F.scalar(1)
        elif rid == "vvw2cubic":
            X[0, X.shape[0] - 1] = F.scalar(1)
        elif rid in ("classical2gl", "plainify"):
            lev = system.levels(ta["inner"] if rid == "classical2gl" else ta, 0)
            lo, hi = int(np.argmin(np.where(lev > 0, lev, 99))), int(np.argmax(lev))
            X[lo, hi] = X[lo, hi] + F.scalar(1)
        elif rid == "d2three":
            M = F.inv_t(X)
            d = len(ta["dims"])
            M[0, d + 1] = 0.5
            els[0] = F.inv_t(M)
        bad = WitnessTuple(w2.action, els, w2.groups)
        if not _rejects(lambda: red.extract(ta, tb, bad)):
            failures.append(f"{rid}/{F.kind}")
    return failures


def criterion_5(quick: bool = False) -> Result:
    count = 16 if quick else 64
    rng = np.random.default_rng(5)
    arrays = [DWayArray(F2, F2.random((2, 2, 2), rng)) for _ in range(count)]
    Og = _groups(F2, "O", (2, 2, 2))
    forms = [G.form for G in Og]
    systems = [system.encode_classical_system(A, forms) for A in arrays]
    disagree = pairs = lifted = 0
    for i, j in itertools.combinations_with_replacement(range(count), 2):
        w = brute_force_isomorphic(ActionKind.UVW, Og, arrays[i], arrays[j])
        g = system.system_brute_force(systems[i], systems[j])
        pairs += 1
        disagree += (w is None) != (g is None)
        if w is not None and i != j and lifted < (8 if quick else 40):
            ra, ta = system.reduce_classical_to_gl(arrays[i], Og)
            rb, tb = system.reduce_classical_to_gl(arrays[j], Og)
            w2 = system.classical_transport(ta, tb, w)
            if not check_witness(w2, ra, rb) or not system.classical_extract(ta, tb, w2).equals(w):
                disagree += 1
            lifted += 1
    # graph-shaped arrays in T(2x2x2, F_2): two arcs on two vertices, loops allowed
    gdis = 0
    gs = list(graph.all_digraphs(2, [2], loops=True))
    for G, H in itertools.product(gs, repeat=2):
        A, B = graph.graph_to_tensor(G, F2)[0], graph.graph_to_tensor(H, F2)[0]
        found = brute_force_isomorphic(ActionKind.UUV, _groups(F2, "GL", (2, 2)), A, B) is not None
        gdis += found != (graph.graph_isomorphism(G, H) is not None)
    rejections = forced_block_rejections()
    ok = disagree == 0 and gdis == 0 and not rejections
    detail = (f"classical2gl: {pairs} pairs, {disagree} disagreements, {lifted} witnesses lifted to the "
              f"plain outputs; graph3: {len(gs) ** 2} pairs, {gdis} disagreements; "
              f"forced-block rejections missed: {rejections or 'none'}")
    return Result(5, "oracle equivalence", ok, detail)


# -- 6 ------------------------------------------------------------------------

def criterion_6(quick: bool = False) -> Result:
    count = 20 if quick else 100
    rng = np.random.default_rng(6)
    A = DWayArray(C, C.random((3, 3, 3), rng))
    Ar = DWayArray(R, R.random((3, 3, 3), rng))
    base = np.array(flattening_invariant(A))
    spectra = [singular_spectrum(Ar, d) for d in range(3)]
    worst_det = worst_spec = 0.0
    for s in range(count):
        U = [sample(GroupSpec("U", 3, C), 3 * s + i) for i in range(3)]
        inv = np.array(flattening_invariant(apply_five_action(ActionKind.UVW, U, A)))
        worst_det = max(worst_det, float(np.max(np.abs(inv - base) / base)))
        O = [sample(GroupSpec("O", 3, R), 3 * s + i) for i in range(3)]
        B = apply_five_action(ActionKind.UVW, O, Ar)
        for d in range(3):
            worst_spec = max(worst_spec, float(np.max(np.abs(singular_spectrum(B, d) - spectra[d]))
                                               / max(spectra[d][0], 1e-300)))
    ok = worst_det <= 1e-6 and worst_spec <= 1e-6
    return Result(6, "invariant invariance", ok,
                  f"{count} actions, max relative drift det {worst_det:.2e}, spectrum {worst_spec:.2e}")


# -- 7 ------------------------------------------------------------------------

def criterion_7(quick: bool = False) -> Result:
    problems = []
    rng = np.random.default_rng(7)
    A = DWayArray(F7, F7.random((2, 2, 2), rng))
    S = polysys.emit_ti_system(A, A, "cubic", ["invertibility"])
    matching = sum(1 for d in S.degrees() if d == 3) - 3
    if matching != 8 or len(S.variables) != 15 or len(S.equations) != 11:
        problems.append(f"counts {len(S.variables)} vars, {len(S.equations)} equations")
    for F in (F7, FieldSpec.Fp(32771)):
        for s in range(5 if quick else 25):
            r = np.random.default_rng(s)
            n = 2 + s % 2
            A = DWayArray(F, F.random((n, n, n), r))
            g = [sample(GroupSpec("GL", n, F), 3 * s + i) for i in range(3)]
            B = apply_five_action(ActionKind.UVW, g, A)
            for variant in ("cubic", "quadratic"):
                S = polysys.emit_ti_system(A, B, variant, ["invertibility"])
                mats = dict(zip("XYZ", g if variant == "cubic" else g[:2] + [F.inv(g[2])]))
                if not polysys.check_assignment(S, polysys.assignment_from_matrices(S, mats)):
                    problems.append(f"planted {variant} over F_{F.p}")
            phi = polysys.alt_form_from_coeffs(F, 4, [int(x) for x in r.integers(0, F.p, 4)])
            M = sample(GroupSpec("GL", 4, F), s)
            psi = apply_five_action(ActionKind.UUU, [M], phi)
            S = polysys.emit_atfe_system(phi, psi, "GL")
            if not polysys.check_assignment(S, polysys.assignment_from_matrices(S, {"A": M.T})):
                problems.append(f"planted ATFE over F_{F.p}")
    arrays = [DWayArray(F2, np.array(bits, dtype=np.int64).reshape(2, 2, 2))
              for bits in itertools.product((0, 1), repeat=8)]
    if quick:
        arrays = arrays[::16]
    G3 = _groups(F2, "GL", (2, 2, 2))
    disagree = pairs = 0
    for i, j in itertools.combinations_with_replacement(range(len(arrays)), 2):
        A, B = arrays[i], arrays[j]
        sol = polysys.solve_tiny(polysys.emit_ti_system(A, B))
        w = brute_force_isomorphic(ActionKind.UVW, G3, A, B)
        pairs += 1
        disagree += (sol is None) != (w is None)
    if disagree:
        problems.append(f"{disagree} solver/oracle disagreements")
    detail = (f"n=2 cubic: {matching} matching + 3 determinant equations, 12 + 3 variables; "
              f"solve_tiny vs oracle on {pairs} F_2 pairs")
    if problems:
        detail += f"; problems: {problems[:5]}"
    return Result(7, "polynomial systems", not problems, detail)


# -- 8 ------------------------------------------------------------------------

def algebra_axioms(dims, F: FieldSpec = F3, seed: int = 0) -> list[str]:
    """Associativity, quiver relations and homomorphism of the induced map for one quiver."""
    problems = []
    rng = np.random.default_rng(seed)
    f = DWayArray(F, F.random(dims, rng))
    if F.is_zero(f.data):
        f = DWayArray(F, F.array(np.ones(dims, dtype=np.int64)))
    Q = pathalg.build_quiver(dims)
    alg = pathalg.quotient_structure(Q, pathalg.encode_tensor_as_path_element(f, Q), F)
    c = alg.structure.data
    left = F.tensordot(c, c, ([2], [0]))                     # (e_a e_b) e_c -> [a, b, c, l]
    right = np.moveaxis(F.tensordot(c, c, ([2], [1])), 2, 0)  # e_a (e_b e_c) -> [a, b, c, l]
    if not F.equal(left, right):
        problems.append(f"associativity {dims}")
    d = Q.d
    full = {pathalg.label(p): k for k, p in enumerate(Q.paths())}
    n = alg.dim

    def basis(lab: str) -> np.ndarray:
        return alg.coords[:, full[lab]]

    def prod(a: str, b: str) -> np.ndarray:
        return F.tensordot(F.tensordot(basis(a), c, ([0], [0])), basis(b), ([0], [0]))

    zero = F.zeros(n)
    verts = [f"v{i + 1}" for i in range(d + 1)]
    arrows = [(i, f"x{i + 1}_{j + 1}") for i in range(d) for j in range(dims[i])]
    for a, b in itertools.product(range(d + 1), repeat=2):
        if not F.equal(prod(verts[a], verts[b]), basis(verts[a]) if a == b else zero):
            problems.append(f"vv' {dims}")
    for v in range(d + 1):
        for i, x in arrows:
            if not F.equal(prod(verts[v], x), basis(x) if v == i else zero):
                problems.append(f"ve {dims}")
            if not F.equal(prod(x, verts[v]), basis(x) if v == i + 1 else zero):
                problems.append(f"ev {dims}")
    for (i, x), (k, y) in itertools.product(arrows, repeat=2):
        if k != i + 1 and not F.equal(prod(x, y), zero):
            problems.append(f"ee' {dims}")
    gs = _groups(F, "GL", dims)
    w = WitnessTuple(ActionKind.GENERAL, [sample(G, seed + i) for i, G in enumerate(gs)], gs)
    g = apply_general_action(w.elements, f)
    _, ta = pathalg.reduce_d_to_3(f)
    _, tb = pathalg.reduce_d_to_3(g)
    M = pathalg.induced_algebra_map(ta, tb, w)
    cg = pathalg.reduce_d_to_3(g)[0].data
    # M(e_a) M(e_b) = M(e_a e_b) for all basis pairs
    lhs = F.tensordot(F.tensordot(M, M, ([], [])), cg, ([0, 2], [0, 1]))   # [a, b, k]
    rhs = np.moveaxis(F.tensordot(M, c, ([1], [2])), 0, 2)                # [a, b, k]
    if not F.equal(lhs, rhs):
        problems.append(f"homomorphism {dims}")
    return problems


def criterion_8(quick: bool = False) -> Result:
    problems = []
    shapes = [dims for d in range(1, 4) for dims in itertools.product((1, 2), repeat=d)]
    for s, dims in enumerate(shapes):
        problems += algebra_axioms(dims, F3, s)
    return Result(8, "path-algebra axioms", not problems,
                  f"{len(shapes)} quivers checked" + (f"; {problems[:5]}" if problems else ""))


# -- 9 ------------------------------------------------------------------------

def criterion_9(quick: bool = False) -> Result:
    count = 20 if quick else 100
    worst = 0.0
    exact_bad = 0
    for s in range(count):
        rng = np.random.default_rng(s)
        dims = [(2, 2, 2), (1, 3, 2), (3, 2, 2), (2, 2, 1)][s % 4]
        for F in (F3, FieldSpec.Q(), R, C):
            if F.kind == "Q" and s % 10:
                continue
            out, _ = skew.reduce(DWayArray(F, F.random(dims, rng)))
            a = out.data
            at = np.transpose(a, (1, 0, 2))
            if F.exact:
                exact_bad += not F.equal(F.neg(at), a)
            else:
                worst = max(worst, float(np.max(np.abs(a + at))))
    ok = exact_bad == 0 and worst <= 1e-12
    return Result(9, "skew-symmetry", ok, f"{count} inputs, exact failures {exact_bad}, float max {worst:.1e}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


# seconds allowed at full size
TIME_LIMITS = {1: 60, 2: 300, 4: 600}


def run(number: int, quick: bool = False) -> Result:
    t = time.perf_counter()
    try:
        res = CRITERIA[number - 1](quick)
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        res = Result(number, CRITERIA[number - 1].__name__, False, f"raised {type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t
    limit = TIME_LIMITS.get(number)
    if limit is not None and not quick and res.seconds > limit:
        res.passed = False
        res.detail += f"; over the {limit}s budget"
    return res


def run_all(quick: bool = False, echo: Callable[[str], None] = print) -> list[Result]:
    out = []
    for k in range(1, len(CRITERIA) + 1):
        res = run(k, quick)
        echo(res.line())
        out.append(res)
    return out
