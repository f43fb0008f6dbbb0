"""Polynomial systems whose solutions are isomorphisms, plus renderers and a tiny solver.

Polynomials are dicts from monomials to nonzero coefficients, where a
monomial is a tuple of ``(variable index, exponent)`` pairs sorted by index.
Only exact fields are supported.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, InputError, ShapeError, UnsupportedError
from .field import FieldSpec
from .groups import enumeration_cap
from .tensor import DWayArray

Monomial = tuple[tuple[int, int], ...]
Poly = dict[Monomial, object]

CONSTRAINTS = ("invertibility", "orthogonality", "inverse")


@dataclass(frozen=True, eq=False)
class PolySystem:
    field: FieldSpec
    variables: tuple[str, ...]
    equations: tuple[Poly, ...] = dc_field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.field.exact:
            raise UnsupportedError("polynomial systems need an exact field")
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variable names")
        nv = len(self.variables)
        eqs = []
        for P in self.equations:
            for mono in P:
                if any(not 0 <= v < nv or e < 1 for v, e in mono):
                    raise ShapeError(f"monomial {mono} does not fit {nv} variables")
            eqs.append(_clean(self.field, P))
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "equations", tuple(eqs))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PolySystem) and self.field == other.field
                and self.variables == other.variables and self.equations == other.equations)

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def degrees(self) -> list[int]:
        return [max((sum(e for _, e in m) for m in P), default=0) for P in self.equations]


# -- polynomial arithmetic ----------------------------------------------------

def _norm(F: FieldSpec, c):
    return int(c) % F.p if F.kind == "Fp" else Fraction(c)


def _clean(F: FieldSpec, P: Mapping) -> Poly:
    out = {}
    for m, c in P.items():
        c = _norm(F, c)
        if c != 0:
            out[tuple(m)] = c
    return out


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def padd(F: FieldSpec, *polys: Poly) -> Poly:
    out: dict = {}
    for P in polys:
        for m, c in P.items():
            out[m] = out.get(m, 0) + c
    return _clean(F, out)


def pmul(F: FieldSpec, P: Poly, Q: Poly) -> Poly:
    out: dict = {}
    for m1, c1 in P.items():
        for m2, c2 in Q.items():
            m = _mono_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return _clean(F, out)


def pscale(F: FieldSpec, c, P: Poly) -> Poly:
    return _clean(F, {m: c * v for m, v in P.items()})


def var(i: int) -> Poly:
    return {((i, 1),): 1}


def const(F: FieldSpec, c) -> Poly:
    return _clean(F, {(): c})


def det_poly(F: FieldSpec, M: Sequence[Sequence[int]]) -> Poly:
    """Determinant of a matrix of variable indices, by cofactor expansion along the first row."""
    n = len(M)
    cache: dict[tuple[int, ...], Poly] = {}

    def minor(cols: tuple[int, ...]) -> Poly:
        r = n - len(cols)
        if not cols:
            return const(F, 1)
        if cols in cache:
            return cache[cols]
        acc: Poly = {}
        for k, c in enumerate(cols):
            rest = cols[:k] + cols[k + 1:]
            term = pmul(F, var(M[r][c]), minor(rest))
            acc = padd(F, acc, term if k % 2 == 0 else pscale(F, -1, term))
        cache[cols] = acc
        return acc

    return minor(tuple(range(n)))


# -- emitters -----------------------------------------------------------------

def _matrix_vars(name: str, n: int, start: int) -> tuple[list[str], list[list[int]]]:
    names = [f"{name}_{i}_{j}" for i in range(n) for j in range(n)]
    idx = [[start + i * n + j for j in range(n)] for i in range(n)]
    return names, idx


def _factor_constraints(F: FieldSpec, M: list[list[int]], constraints: set[str],
                        slack: int | None, inv: list[list[int]] | None) -> list[Poly]:
    n = len(M)
    eqs: list[Poly] = []
    if "invertibility" in constraints:
        eqs.append(padd(F, pmul(F, det_poly(F, M), var(slack)), const(F, -1)))
    if "inverse" in constraints:
        for A, B in ((M, inv), (inv, M)):
            for i in range(n):
                for j in range(n):
                    acc = [pmul(F, var(A[i][k]), var(B[k][j])) for k in range(n)]
                    eqs.append(padd(F, *acc, const(F, -1 if i == j else 0)))
    if "orthogonality" in constraints:
        for i in range(n):
            for j in range(i, n):
                acc = [pmul(F, var(M[k][i]), var(M[k][j])) for k in range(n)]
                eqs.append(padd(F, *acc, const(F, -1 if i == j else 0)))
    return eqs


def _declare(names: list[str], letter: str, n: int, constraints: set[str]):
    """Append a factor's variables (matrix, then slack, then inverse matrix)."""
    mnames, M = _matrix_vars(letter, n, len(names))
    names.extend(mnames)
    slack = inv = None
    if "invertibility" in constraints:
        slack = len(names)
        names.append(letter.lower())
    if "inverse" in constraints:
        inames, inv = _matrix_vars(letter + "inv", n, len(names))
        names.extend(inames)
    return M, slack, inv


def _check_constraints(constraints: Iterable[str]) -> set[str]:
    cs = set(constraints)
    bad = cs - set(CONSTRAINTS)
    if bad:
        raise InputError(f"unknown constraints {sorted(bad)}")
    return cs


def emit_ti_system(A: DWayArray, B: DWayArray, variant: str = "cubic",
                   constraints: Iterable[str] = ("invertibility",)) -> PolySystem:
    """Equations for (X, Y, Z) . A = B.

    The cubic variant matches every entry of (X, Y, Z) . A with B. The
    quadratic variant matches (X, Y, I) . A with (I, I, Z) . B, so there Z
    stands for the inverse of the third witness factor.
    """
    F = A.field
    if not F.exact:
        raise UnsupportedError("polynomial systems need an exact field")
    if A.dims != B.dims or A.order != 3 or B.field != F:
        raise ShapeError("A and B must be 3-way arrays of equal dims over one field")
    if variant not in ("cubic", "quadratic"):
        raise InputError(f"unknown variant {variant!r}")
    cs = _check_constraints(constraints)
    l, m, n = A.dims
    names: list[str] = []
    factors = [_declare(names, L, k, cs) for L, k in zip("XYZ", (l, m, n))]
    (X, _, _), (Y, _, _), (Z, _, _) = factors
    a, b = A.data, B.data
    nzA = [tuple(int(i) for i in idx) for idx in np.argwhere(F.nonzero_mask(a))]
    nzB = [tuple(int(i) for i in idx) for idx in np.argwhere(F.nonzero_mask(b))]
    eqs: list[Poly] = []
    for i, j, k in itertools.product(range(l), range(m), range(n)):
        P: dict = {}
        if variant == "cubic":
            for (p, q, r) in nzA:
                mono = tuple(_merge([(X[i][p], 1), (Y[j][q], 1), (Z[k][r], 1)]))
                P[mono] = P.get(mono, 0) + a[p, q, r]
            P[()] = P.get((), 0) - b[i, j, k]
        else:
            for (p, q, r) in nzA:
                if r != k:
                    continue
                mono = _mono_mul(((X[i][p], 1),), ((Y[j][q], 1),))
                P[mono] = P.get(mono, 0) + a[p, q, r]
            for (p, q, r) in nzB:
                if p != i or q != j:
                    continue
                mono = ((Z[k][r], 1),)
                P[mono] = P.get(mono, 0) - b[p, q, r]
        eqs.append(_clean(F, P))
    for M, slack, inv in factors:
        eqs.extend(_factor_constraints(F, M, cs, slack, inv))
    return PolySystem(F, tuple(names), tuple(eqs))


def _merge(mono):
    d: dict[int, int] = {}
    for v, e in mono:
        d[v] = d.get(v, 0) + e
    return sorted(d.items())


def is_alternating(phi: DWayArray) -> bool:
    F = phi.field
    if phi.order != 3 or len(set(phi.dims)) != 1:
        return False
    a = phi.data
    for perm in ((1, 0, 2), (0, 2, 1)):
        if not F.equal(F.neg(np.transpose(a, perm)), a):
            return False
    n = phi.dims[0]
    i = np.arange(n)
    return F.is_zero(a[i, i, :]) and F.is_zero(a[:, i, i]) and F.is_zero(a[i, :, i])


def alt_form_coeffs(phi: DWayArray) -> list:
    """The C(n, 3) independent coefficients phi[u, v, w], u < v < w."""
    n = phi.dims[0]
    return [phi.data[u, v, w] for u, v, w in itertools.combinations(range(n), 3)]


def alt_form_from_coeffs(F: FieldSpec, n: int, coeffs: Sequence) -> DWayArray:
    triples = list(itertools.combinations(range(n), 3))
    if len(coeffs) != len(triples):
        raise ShapeError(f"need {len(triples)} coefficients for n = {n}")
    a = F.zeros((n, n, n))
    for (u, v, w), c in zip(triples, coeffs):
        c = F.scalar(c)
        for perm in itertools.permutations(range(3)):
            sign = _perm_sign(perm)
            idx = tuple((u, v, w)[k] for k in perm)
            a[idx] = c if sign > 0 else F.neg(np.asarray([c], dtype=a.dtype))[0]
    return DWayArray(F, a)


def _perm_sign(perm: Sequence[int]) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def emit_atfe_system(phi: DWayArray, psi: DWayArray, group: str = "GL",
                     constraints: Iterable[str] = ("invertibility",)) -> PolySystem:
    """Equations phi(Au, Av, Aw) = psi(u, v, w) for basis triples u < v < w."""
    F = phi.field
    if not F.exact:
        raise UnsupportedError("polynomial systems need an exact field")
    if phi.dims != psi.dims or not is_alternating(phi) or not is_alternating(psi):
        raise InputError("need two alternating 3-way arrays of equal size")
    if group not in ("GL", "O"):
        raise InputError(f"unsupported group {group!r}")
    cs = _check_constraints(constraints)
    if group == "O":
        cs.add("orthogonality")
    n = phi.dims[0]
    names: list[str] = []
    M, slack, inv = _declare(names, "A", n, cs)
    a = phi.data
    nz = [tuple(int(i) for i in idx) for idx in np.argwhere(F.nonzero_mask(a))]
    eqs = []
    for u, v, w in itertools.combinations(range(n), 3):
        P: dict = {}
        for (p, q, r) in nz:
            mono = tuple(_merge([(M[p][u], 1), (M[q][v], 1), (M[r][w], 1)]))
            P[mono] = P.get(mono, 0) + a[p, q, r]
        P[()] = P.get((), 0) - psi.data[u, v, w]
        eqs.append(_clean(F, P))
    eqs.extend(_factor_constraints(F, M, cs, slack, inv))
    return PolySystem(F, tuple(names), tuple(eqs))


# -- assignments --------------------------------------------------------------

def assignment_from_matrices(S: PolySystem, mats: Mapping[str, np.ndarray]) -> dict[str, object]:
    """Fill matrix variables, slacks (inverse determinants) and inverse matrices."""
    F = S.field
    out: dict[str, object] = {}
    for letter, M in mats.items():
        M = F.array(M)
        n = M.shape[0]
        for i in range(n):
            for j in range(n):
                out[f"{letter}_{i}_{j}"] = M[i, j]
        if letter.lower() in S.variables:
            out[letter.lower()] = F.inv_scalar(F.det(M))
        if f"{letter}inv_0_0" in S.variables:
            Mi = F.inv(M)
            for i in range(n):
                for j in range(n):
                    out[f"{letter}inv_{i}_{j}"] = Mi[i, j]
    return out


def evaluate(F: FieldSpec, P: Poly, values: Sequence) -> object:
    total = 0
    for m, c in P.items():
        t = c
        for v, e in m:
            t = t * values[v] ** e
        total += t
    return _norm(F, total)


@dataclass(frozen=True)
class AssignmentCheck:
    ok: bool
    violated: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_assignment(S: PolySystem, assignment: Mapping[str, object] | Sequence) -> AssignmentCheck:
    F = S.field
    if isinstance(assignment, Mapping):
        missing = [v for v in S.variables if v not in assignment]
        if missing:
            raise ShapeError(f"assignment misses {missing[:3]}")
        values = [_norm(F, assignment[v]) for v in S.variables]
    else:
        if len(assignment) != len(S.variables):
            raise ShapeError(f"need {len(S.variables)} values, got {len(assignment)}")
        values = [_norm(F, v) for v in assignment]
    for k, P in enumerate(S.equations):
        if evaluate(F, P, values) != 0:
            return AssignmentCheck(False, k)
    return AssignmentCheck(True)


# -- rendering ----------------------------------------------------------------

def _grlex_key(m: Monomial, nv: int):
    exps = [0] * nv
    for v, e in m:
        exps[v] = e
    return (-sum(exps), [-e for e in exps])


def _sorted_terms(S: PolySystem, P: Poly):
    nv = len(S.variables)
    return sorted(P.items(), key=lambda kv: _grlex_key(kv[0], nv))


def _render_poly(S: PolySystem, P: Poly) -> str:
    if not P:
        return "0"
    F = S.field
    terms = []
    for m, c in _sorted_terms(S, P):
        parts = [str(F.render(c))]
        parts += [S.variables[v] + (f"^{e}" if e > 1 else "") for v, e in m]
        terms.append("*".join(parts))
    return " + ".join(terms)


def render(S: PolySystem, fmt: str = "generic") -> str:
    F = S.field
    if fmt == "generic":
        head = f"field p={F.p}" if F.kind == "Fp" else "field Q"
        lines = [head, "vars " + ",".join(S.variables)]
        lines += [_render_poly(S, P) for P in S.equations]
        return "\n".join(lines) + "\n"
    if fmt == "magma":
        ring = f"GF({F.p})" if F.kind == "Fp" else "Rationals()"
        nv = len(S.variables)
        polys = ",\n    ".join(_render_poly(S, P) for P in S.equations)
        names = ", ".join(S.variables)
        lines = [
            "// isomorphism polynomial system",
            f"K := {ring};",
            f"R<{names}> := PolynomialRing(K, {nv}, \"grevlex\");" if nv else "R := PolynomialRing(K, 0);",
            f"I := ideal<R | {polys}>;" if S.equations else "I := ideal<R | 0>;",
            "G := GroebnerBasis(I);",
            "// V := Variety(I);",
        ]
        return "\n".join(lines) + "\n"
    raise InputError(f"unknown format {fmt!r}")


_TERM = re.compile(r"^(-?[0-9]+(?:/[0-9]+)?)((?:\*[A-Za-z][A-Za-z0-9_]*(?:\^[0-9]+)?)*)$")


def parse_generic(text: str) -> PolySystem:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    if len(lines) < 2 or not lines[0].startswith("field ") or not lines[1].startswith("vars"):
        raise InputError("expected a 'field' header and a 'vars' line")
    name = lines[0][len("field "):].strip()
    if name.startswith("p="):
        F = FieldSpec.Fp(int(name[2:]))
    elif name == "Q":
        F = FieldSpec.Q()
    else:
        raise InputError(f"unknown field line {lines[0]!r}")
    rest = lines[1][len("vars"):].strip()
    names = tuple(rest.split(",")) if rest else ()
    pos = {n: i for i, n in enumerate(names)}
    eqs = []
    for ln in lines[2:]:
        if ln == "0":
            eqs.append({})
            continue
        P: dict = {}
        for term in ln.split(" + "):
            mt = _TERM.match(term.strip())
            if not mt:
                raise InputError(f"cannot parse term {term!r}")
            c = Fraction(mt.group(1))
            mono = []
            for factor in filter(None, mt.group(2).split("*")):
                name, _, e = factor.partition("^")
                if name not in pos:
                    raise InputError(f"undeclared variable {name!r}")
                mono.append((pos[name], int(e) if e else 1))
            key = tuple(_merge(mono))
            P[key] = P.get(key, 0) + (c if F.kind == "Q" else int(c) % F.p)
        eqs.append(P)
    return PolySystem(F, names, tuple(eqs))


# -- exhaustive solving -------------------------------------------------------

def _eval_batch(p: int, P: Poly, vals: np.ndarray) -> np.ndarray:
    out = np.zeros(vals.shape[0], dtype=np.int64)
    for m, c in P.items():
        t = np.full(vals.shape[0], int(c) % p, dtype=np.int64)
        for v, e in m:
            t = (t * pow_mod(vals[:, v], e, p)) % p
        out = (out + t) % p
    return out


def pow_mod(x: np.ndarray, e: int, p: int) -> np.ndarray:
    r = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            r = (r * base) % p
        base = (base * base) % p
        e >>= 1
    return r


def solve_tiny(S: PolySystem, cap: int | None = None) -> dict[str, int] | None:
    """Lex-first solution over F_p by staged exhaustive search, or None.

    Variables are fixed one at a time in declaration order; each equation is
    checked as soon as all of its variables are fixed.
    """
    F = S.field
    if F.kind != "Fp":
        raise UnsupportedError("exhaustive solving needs a prime field")
    cap = enumeration_cap() if cap is None else cap
    p, nv = F.p, len(S.variables)
    if p ** nv > cap:
        raise CapExceeded(f"{p}^{nv} assignments exceed the cap {cap}")
    ready: list[list[Poly]] = [[] for _ in range(nv + 1)]
    for P in S.equations:
        last = max((v for m in P for v, _ in m), default=-1)
        ready[last + 1].append(P)
    if any(P for P in ready[0]):
        return None
    rows = np.zeros((1, 0), dtype=np.int64)
    digits = np.arange(p, dtype=np.int64)
    for k in range(nv):
        n = rows.shape[0]
        rows = np.hstack([np.repeat(rows, p, axis=0), np.tile(digits, n)[:, None]])
        for P in ready[k + 1]:
            rows = rows[_eval_batch(p, P, rows) == 0]
            if rows.shape[0] == 0:
                return None
    return {name: int(v) for name, v in zip(S.variables, rows[0])}
