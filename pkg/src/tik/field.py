"""Scalar fields and the dense linear algebra built on them.

Four kinds are supported: prime fields ``Fp`` (int64 residues, p < 2**31),
the rationals ``Q`` (numpy object arrays of ``Fraction``), and the reals
``R`` / complexes ``C`` (float64 / complex128 with a comparison tolerance).
Matrices are plain numpy arrays; the field that interprets them travels
alongside as a ``FieldSpec``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import FieldMismatch, InputError, SingularError, UnsupportedError

KINDS = ("Fp", "Q", "R", "C")
_FLOAT_EXACT_LIMIT = 2**53


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: int = 0
    tol: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InputError(f"unknown field kind {self.kind!r}")
        if self.kind == "Fp":
            if not is_prime(self.p) or self.p >= 2**31:
                raise InputError(f"modulus must be a prime below 2^31, got {self.p}")
            if self.tol != 0:
                raise InputError("exact fields take tol=0")
        elif self.kind == "Q":
            if self.p or self.tol:
                raise InputError("Q takes neither p nor tol")
        else:
            if self.p:
                raise InputError("float fields take no modulus")
            if not self.tol >= 0:
                raise InputError("tol must be non-negative")

    # -- constructors ---------------------------------------------------

    @classmethod
    def Fp(cls, p: int) -> "FieldSpec":
        return cls("Fp", p=int(p))

    @classmethod
    def Q(cls) -> "FieldSpec":
        return cls("Q")

    @classmethod
    def R(cls, tol: float = 1e-9) -> "FieldSpec":
        return cls("R", tol=float(tol))

    @classmethod
    def C(cls, tol: float = 1e-9) -> "FieldSpec":
        return cls("C", tol=float(tol))

    @property
    def exact(self) -> bool:
        return self.kind in ("Fp", "Q")

    @property
    def is_float(self) -> bool:
        return not self.exact

    @property
    def dtype(self):
        return {"Fp": np.int64, "Q": object, "R": np.float64, "C": np.complex128}[self.kind]

    def __str__(self) -> str:
        if self.kind == "Fp":
            return f"F_{self.p}"
        return self.kind

    # -- array construction ---------------------------------------------

    def array(self, x: Any) -> np.ndarray:
        """Coerce ``x`` into a canonical array of this field."""
        if self.kind == "Fp":
            a = np.asarray(x)
            if a.dtype == object:
                a = np.vectorize(lambda v: _to_residue(v, self.p), otypes=[np.int64])(a) if a.size else a.astype(np.int64)
            elif a.dtype.kind == "f":
                if not np.all(np.isfinite(a)) or np.any(a != np.rint(a)):
                    raise FieldMismatch("non-integral value for a prime field")
                a = a.astype(np.int64)
            elif a.dtype.kind == "c":
                raise FieldMismatch("complex value for a prime field")
            elif a.dtype.kind == "b":
                a = a.astype(np.int64)
            return np.mod(a.astype(np.int64), self.p)
        if self.kind == "Q":
            a = np.asarray(x)
            if a.dtype.kind == "c":
                raise FieldMismatch("complex value for Q")
            out = np.empty(a.shape, dtype=object)
            flat = a.reshape(-1)
            of = out.reshape(-1)
            for i, v in enumerate(flat):
                of[i] = Fraction(v) if not isinstance(v, Fraction) else v
            return out
        if self.kind == "R":
            a = np.asarray(x)
            if a.dtype.kind == "c":
                if np.any(a.imag != 0):
                    raise FieldMismatch("complex value for R")
                a = a.real
            a = np.array(a, dtype=np.float64)
        else:
            a = np.array(x, dtype=np.complex128)
        if not np.all(np.isfinite(a)):
            raise FieldMismatch("non-finite float entry")
        return a

    def zeros(self, shape) -> np.ndarray:
        if self.kind == "Q":
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1) if self.kind == "Q" else 1
        return out

    def scalar(self, v: Any):
        return self.array(np.asarray([v], dtype=object if self.kind in ("Fp", "Q") else None))[0]

    def random(self, shape, rng: np.random.Generator, density: float = 1.0) -> np.ndarray:
        if self.kind == "Fp":
            a = rng.integers(0, self.p, size=shape, dtype=np.int64)
        elif self.kind == "Q":
            num = rng.integers(-4, 5, size=shape)
            den = rng.integers(1, 4, size=shape)
            a = self.zeros(shape)
            for idx in np.ndindex(*a.shape):
                a[idx] = Fraction(int(num[idx]), int(den[idx]))
        elif self.kind == "R":
            a = rng.standard_normal(shape)
        else:
            a = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        if density < 1.0:
            mask = rng.random(shape) < density
            a = np.where(mask, a, self.zeros(shape))
            if self.kind == "Q":
                a = a.astype(object)
        return a

    # -- arithmetic -----------------------------------------------------

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = a + b
        return np.mod(out, self.p) if self.kind == "Fp" else out

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = a - b
        return np.mod(out, self.p) if self.kind == "Fp" else out

    def scale(self, c, a: np.ndarray) -> np.ndarray:
        if self.kind == "Fp":
            return np.mod(a * (int(c) % self.p), self.p)
        return a * c

    def neg(self, a: np.ndarray) -> np.ndarray:
        return np.mod(-a, self.p) if self.kind == "Fp" else -a

    def inv_scalar(self, c):
        if self.kind == "Fp":
            c = int(c) % self.p
            if c == 0:
                raise SingularError("inverse of zero")
            return pow(c, -1, self.p)
        if c == 0:
            raise SingularError("inverse of zero")
        return 1 / c if self.is_float else Fraction(1) / c

    def _fp_safe(self, inner: int) -> bool:
        return inner * (self.p - 1) ** 2 < _FLOAT_EXACT_LIMIT

    def tensordot(self, a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
        if self.kind != "Fp":
            return np.tensordot(a, b, axes=axes)
        if isinstance(axes, int):
            inner = int(np.prod(b.shape[:axes])) if axes else 1
        else:
            inner = int(np.prod([b.shape[i] for i in np.atleast_1d(axes[1])]))
        if self._fp_safe(inner):
            out = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes=axes)
            return np.mod(np.rint(out).astype(np.int64), self.p)
        out = np.tensordot(a.astype(object), b.astype(object), axes=axes)
        return np.mod(out, self.p).astype(np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind != "Fp":
            return a @ b
        if self._fp_safe(a.shape[-1]):
            out = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
            return np.mod(out, self.p)
        return np.mod(a.astype(object) @ b.astype(object), self.p).astype(np.int64)

    def mode_product(self, g: np.ndarray, A: np.ndarray, axis: int) -> np.ndarray:
        """Contract ``g`` (n x n) against axis ``axis`` of ``A``."""
        return np.moveaxis(self.tensordot(g, A, axes=([1], [axis])), 0, axis)

    def ct(self, M: np.ndarray) -> np.ndarray:
        """Conjugate transpose (plain transpose outside C)."""
        return M.conj().T if self.kind == "C" else M.T

    # -- comparison -----------------------------------------------------

    def maxabs(self, a: np.ndarray) -> float:
        if a.size == 0:
            return 0.0
        if self.exact:
            return 0.0
        return float(np.max(np.abs(a)))

    def is_zero(self, a: np.ndarray, scale: float = 0.0) -> bool:
        if a.size == 0:
            return True
        if self.kind == "Fp":
            return not np.any(np.mod(a, self.p))
        if self.kind == "Q":
            return all(v == 0 for v in a.flat)
        return self.maxabs(a) <= self.tol * max(1.0, scale)

    def nonzero_mask(self, a: np.ndarray) -> np.ndarray:
        if self.kind == "Fp":
            return np.mod(a, self.p) != 0
        if self.kind == "Q":
            return np.asarray(a != 0, dtype=bool)
        return np.abs(a) > self.tol * max(1.0, self.maxabs(a))

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        if a.shape != b.shape:
            return False
        if self.exact:
            return self.is_zero(self.sub(a, b))
        scale = max(self.maxabs(a), self.maxabs(b))
        return self.is_zero(a - b, scale)

    # -- exact and numeric linear algebra -------------------------------

    def rref(self, M: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[int]]:
        """Reduced row echelon form ``E`` with transform ``T`` so that ``T M = E``."""
        if not self.exact:
            raise UnsupportedError("row reduction is only available over exact fields")
        return _rref(self, M)

    def rank(self, M: np.ndarray) -> int:
        if M.size == 0:
            return 0
        if self.exact:
            return len(_rref(self, M, with_transform=False)[2])
        s = np.linalg.svd(M, compute_uv=False)
        if s.size == 0 or s[0] == 0:
            return 0
        return int(np.sum(s > self.tol * s[0]))

    def inv(self, M: np.ndarray) -> np.ndarray:
        n = M.shape[0]
        if M.ndim != 2 or M.shape[1] != n:
            raise InputError("inverse of a non-square matrix")
        if self.exact:
            E, T, piv = _rref(self, M)
            if len(piv) < n:
                raise SingularError("matrix is singular")
            return T
        if self.rank(M) < n:
            raise SingularError("matrix is numerically singular")
        return np.linalg.inv(M)

    def inv_t(self, M: np.ndarray) -> np.ndarray:
        """Inverse transpose, using the (conjugate) transpose when M is unitary."""
        if self.is_float:
            n = M.shape[0]
            if self.equal(self.ct(M) @ M, np.eye(n)):
                return M.conj() if self.kind == "C" else M
        return self.inv(M).T

    def det(self, M: np.ndarray):
        n = M.shape[0]
        if not self.exact:
            return np.linalg.det(M) if n else 1.0
        A = M.copy()
        if self.kind == "Q":
            A = A.astype(object)
        d = Fraction(1) if self.kind == "Q" else 1
        for c in range(n):
            nz = [i for i in range(c, n) if A[i, c] != 0]
            if not nz:
                return self.scalar(0)
            i = nz[0]
            if i != c:
                A[[c, i]] = A[[i, c]]
                d = -d
            piv = A[c, c]
            d = d * piv
            inv = self.inv_scalar(piv)
            f = A[c + 1:, c] * inv
            if self.kind == "Fp":
                f = np.mod(f, self.p)
            A[c + 1:] = A[c + 1:] - np.outer(f, A[c])
            if self.kind == "Fp":
                A = np.mod(A, self.p)
                d = d % self.p
        return d % self.p if self.kind == "Fp" else d

    def nullspace(self, M: np.ndarray) -> np.ndarray:
        """Rows spanning the right kernel {x : M x = 0}."""
        rows, cols = M.shape
        if self.exact:
            E, _, piv = _rref(self, M, with_transform=False)
            free = [c for c in range(cols) if c not in piv]
            N = self.zeros((len(free), cols))
            one = Fraction(1) if self.kind == "Q" else 1
            for k, f in enumerate(free):
                N[k, f] = one
                for r, pc in enumerate(piv):
                    N[k, pc] = (-E[r, f]) % self.p if self.kind == "Fp" else -E[r, f]
            return N
        if M.size == 0:
            return np.eye(cols, dtype=self.dtype)
        u, s, vh = np.linalg.svd(M)
        r = self.rank(M)
        return vh[r:].conj()

    def solve_left(self, MA: np.ndarray, MB: np.ndarray):
        """Solve R MA = MB. Returns ``(R0, N)`` with N's rows spanning the left
        kernel of MA (so every solution is R0 + C N), or None if inconsistent."""
        if self.exact:
            E, T, piv = _rref(self, MA.T)
            rhs = self.matmul(T, MB.T) if self.kind == "Fp" else T @ MB.T
            r = len(piv)
            if not self.is_zero(rhs[r:]):
                return None
            X = self.zeros((MA.shape[0], MB.shape[0]))
            for i, pc in enumerate(piv):
                X[pc] = rhs[i]
            return X.T, self.nullspace(MA.T)
        X, *_ = np.linalg.lstsq(MA.T, MB.T, rcond=None)
        R0 = X.T
        if not self.equal(R0 @ MA, MB):
            return None
        return R0, self.nullspace(MA.T)

    # -- serialization --------------------------------------------------

    def render(self, v) -> Any:
        if self.kind == "Fp":
            return str(int(v) % self.p)
        if self.kind == "Q":
            v = Fraction(v)
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        if self.kind == "R":
            return float(v)
        v = complex(v)
        return [v.real, v.imag]

    def parse(self, s: Any):
        try:
            if self.kind == "Fp":
                if isinstance(s, str) and "/" in s:
                    num, den = Fraction(s).numerator, Fraction(s).denominator
                    return num * pow(den, -1, self.p) % self.p
                return int(s) % self.p
            if self.kind == "Q":
                return Fraction(s)
            if self.kind == "R":
                return float(s)
            if isinstance(s, (list, tuple)):
                return complex(float(s[0]), float(s[1]))
            return complex(s)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse scalar {s!r} over {self}") from exc

    def to_dict(self) -> dict:
        if self.kind == "Fp":
            return {"kind": "Fp", "p": self.p}
        if self.kind == "Q":
            return {"kind": "Q"}
        return {"kind": self.kind, "tol": self.tol}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        try:
            kind = d["kind"]
            if kind == "Fp":
                return cls.Fp(int(d["p"]))
            if kind == "Q":
                return cls.Q()
            if kind in ("R", "C"):
                return cls(kind, tol=float(d.get("tol", 1e-9)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed field {d!r}") from exc
        raise InputError(f"unknown field kind {d!r}")

    @classmethod
    def parse_name(cls, text: str) -> "FieldSpec":
        """Parse short names such as ``F3``, ``Fp:7``, ``Q``, ``R``, ``C``."""
        t = text.strip()
        if t in ("Q", "R", "C"):
            return getattr(cls, t)()
        for prefix in ("Fp:", "Fp", "F_", "F"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls.Fp(int(t[len(prefix):]))
        raise InputError(f"unknown field name {text!r}")


def _to_residue(v, p: int) -> int:
    if isinstance(v, Fraction):
        if v.denominator % p == 0:
            raise FieldMismatch("denominator divisible by p")
        return v.numerator * pow(v.denominator, -1, p) % p
    if isinstance(v, float):
        if v != int(v):
            raise FieldMismatch("non-integral value for a prime field")
    return int(v) % p


def _rref(F: FieldSpec, M: np.ndarray, with_transform: bool = True):
    rows, cols = M.shape
    fp = F.kind == "Fp"
    A = np.mod(M.astype(np.int64), F.p) if fp else F.array(M).copy()
    T = F.eye(rows) if with_transform else None
    piv: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = A[r:, c]
        nz = np.nonzero(col)[0] if fp else [i for i, v in enumerate(col) if v != 0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
            if T is not None:
                T[[r, i]] = T[[i, r]]
        inv = F.inv_scalar(A[r, c])
        A[r] = A[r] * inv
        if T is not None:
            T[r] = T[r] * inv
        if fp:
            A[r] %= F.p
            if T is not None:
                T[r] %= F.p
        f = A[:, c].copy()
        f[r] = 0
        A = A - np.outer(f, A[r])
        if T is not None:
            T = T - np.outer(f, T[r])
        if fp:
            A %= F.p
            if T is not None:
                T %= F.p
        piv.append(c)
        r += 1
    return A, T, piv
