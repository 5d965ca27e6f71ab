"""Exact GF(q) arithmetic by lookup tables, vectors, matrices, hyperplanes.

Elements of GF(p^d) are integers whose base-p digits are the polynomial
coefficients (low degree first), so GF(4) has 0, 1, 2 = x, 3 = x + 1.
Vectors in GF(q)^n are addressed by the mixed-radix index sum x_i q^i,
which for prime q agrees with ``FiniteAbelianGroup.elementary(q, n)``.
"""
from __future__ import annotations

import functools
import json
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .groups import factorize

MAX_FIELD_ORDER = 256

# fixed moduli, low-degree coefficient first, monic
FIXED_MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
    16: (1, 1, 0, 0, 1),
    25: (2, 1, 1),
}


class FieldError(ValueError):
    pass


def _poly_tables(p: int, degree: int, modulus: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    q = p**degree
    digits = np.array([[(a // p**i) % p for i in range(degree)] for a in range(q)], dtype=np.int64)
    weights = p ** np.arange(degree, dtype=np.int64)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    mul = np.zeros((q, q), dtype=np.int64)
    mod = np.asarray(modulus, dtype=np.int64)
    for a in range(q):
        for b in range(a, q):
            prod = np.convolve(digits[a], digits[b]) % p
            for d in range(len(prod) - 1, degree - 1, -1):
                c = prod[d]
                if c:
                    prod[d - degree:d + 1] = (prod[d - degree:d + 1] - c * mod) % p
            val = int(prod[:degree] @ weights)
            mul[a, b] = mul[b, a] = val
    return add, mul


def _is_field(mul: np.ndarray) -> bool:
    q = mul.shape[0]
    return all(np.count_nonzero(mul[a, 1:] == 1) == 1 for a in range(1, q))


def _first_irreducible(p: int, degree: int) -> tuple[int, ...]:
    for tail in itertools.product(range(p), repeat=degree):
        modulus = tuple(reversed(tail)) + (1,)
        if modulus[0] == 0:
            continue
        _, mul = _poly_tables(p, degree, modulus)
        if _is_field(mul):
            return modulus
    raise FieldError(f"no irreducible polynomial of degree {degree} over GF({p})")


@dataclass(frozen=True, eq=False)
class FieldSpec:
    q: int
    p: int
    degree: int
    modulus: tuple[int, ...]
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)
    sub: np.ndarray = field(repr=False)

    @property
    def is_prime(self) -> bool:
        return self.degree == 1

    def __hash__(self):
        return hash(self.q)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.q == self.q

    def __reduce__(self):
        return (field_make, (self.q,))

    # scalar helpers -----------------------------------------------------
    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(q)")
        return int(self.mul[a, self.inv[b]])

    # vector helpers -----------------------------------------------------
    def vadd(self, x, y) -> np.ndarray:
        return self.add[np.asarray(x), np.asarray(y)]

    def vsub(self, x, y) -> np.ndarray:
        return self.sub[np.asarray(x), np.asarray(y)]

    def scale(self, c: int, x) -> np.ndarray:
        return self.mul[c, np.asarray(x)]

    def dot(self, x, y) -> int:
        acc = 0
        for a, b in zip(np.asarray(x).ravel(), np.asarray(y).ravel()):
            acc = self.add[acc, self.mul[a, b]]
        return int(acc)

    def matvec(self, m, x) -> np.ndarray:
        m = np.asarray(m, dtype=np.int64)
        return np.array([self.dot(row, x) for row in m], dtype=np.int64)

    def vec_index(self, x) -> int:
        x = np.asarray(x, dtype=np.int64)
        return int(x @ (self.q ** np.arange(x.size, dtype=np.int64)))

    def all_vectors(self, n: int) -> np.ndarray:
        return all_vectors(self.q, n)


@functools.lru_cache(maxsize=None)
def all_vectors(q: int, n: int) -> np.ndarray:
    idx = np.arange(q**n, dtype=np.int64)
    out = np.empty((q**n, n), dtype=np.int64)
    for i in range(n):
        out[:, i] = (idx // q**i) % q
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=None)
def field_make(q: int) -> FieldSpec:
    """GF(q) for a prime power q <= 256 with a fixed modulus."""
    if q < 2 or q > MAX_FIELD_ORDER:
        raise FieldError(f"field order must be a prime power in [2, {MAX_FIELD_ORDER}], got {q}")
    fac = factorize(q)
    if len(fac) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, degree), = fac.items()
    if degree == 1:
        modulus = (0, 1)
        r = np.arange(p, dtype=np.int64)
        add = (r[:, None] + r[None, :]) % p
        mul = (r[:, None] * r[None, :]) % p
    else:
        modulus = FIXED_MODULI.get(q) or _first_irreducible(p, degree)
        add, mul = _poly_tables(p, degree, modulus)
        if not _is_field(mul):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
    neg = np.array([int(np.flatnonzero(add[a] == 0)[0]) for a in range(q)], dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
    sub = add[:, neg]
    for arr in (add, mul, neg, inv, sub):
        arr.setflags(write=False)
    spec = FieldSpec(q, p, degree, tuple(modulus), add, mul, neg, inv, sub)
    if q <= 16:
        check_field_axioms(spec)
    return spec


def check_field_axioms(f: FieldSpec) -> None:
    """Exhaustive associativity/commutativity/distributivity on the tables."""
    add, mul = f.add, f.mul
    r = np.arange(f.q)
    ok = np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
    for a in range(f.q):
        if not np.array_equal(add[add[a][:, None], r[None, :]], add[a][add]):
            ok = False
        if not np.array_equal(mul[mul[a][:, None], r[None, :]], mul[a][mul]):
            ok = False
        if not np.array_equal(mul[a][add], add[mul[a][:, None], mul[a][None, :]]):
            ok = False
    if not ok or not np.all(add[0] == r) or not np.all(mul[1] == r) or not _is_field(mul):
        raise FieldError(f"tables for GF({f.q}) violate the field axioms")


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------

def row_reduce(f: FieldSpec, m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim != 2:
        raise FieldError("row_reduce needs a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        a[[r, piv]] = a[[piv, r]]
        a[r] = f.mul[f.inv[a[r, c]], a[r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = f.sub[a[i], f.mul[a[i, c], a[r]]]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(f: FieldSpec, m) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return len(row_reduce(f, m)[1])


def solve_affine(f: FieldSpec, m, v) -> tuple[np.ndarray, np.ndarray] | None:
    """All solutions of m x = v as (particular, kernel basis rows), or None."""
    m = np.asarray(m, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64).reshape(-1, 1)
    rows, cols = m.shape
    red, piv = row_reduce(f, np.hstack([m, v]))
    if cols in piv:
        return None
    part = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(piv):
        part[c] = red[r, cols]
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for fc in free:
        vec = np.zeros(cols, dtype=np.int64)
        vec[fc] = 1
        for r, c in enumerate(piv):
            vec[c] = f.neg[red[r, fc]]
        basis.append(vec)
    kern = np.array(basis, dtype=np.int64).reshape(len(basis), cols)
    return part, kern


def span_points(f: FieldSpec, base: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Every point base + sum c_i kernel_i, coefficients in odometer order."""
    d = kernel.shape[0]
    coeffs = all_vectors(f.q, d)
    pts = np.tile(np.asarray(base, dtype=np.int64), (coeffs.shape[0], 1))
    for i in range(d):
        pts = f.add[pts, f.mul[coeffs[:, i][:, None], kernel[i][None, :]]]
    return pts


# ---------------------------------------------------------------------------
# hyperplanes
# ---------------------------------------------------------------------------

def canonical_normal(f: FieldSpec, x) -> tuple[int, ...]:
    x = np.asarray(x, dtype=np.int64)
    nz = np.flatnonzero(x)
    if nz.size == 0:
        raise FieldError("the zero vector has no orthogonal hyperplane")
    return tuple(int(c) for c in f.mul[f.inv[x[nz[0]]], x])


@dataclass(frozen=True)
class Hyperplane:
    field: FieldSpec
    normal: tuple[int, ...]

    @classmethod
    def of(cls, f: FieldSpec, x) -> "Hyperplane":
        return cls(f, canonical_normal(f, x))

    @property
    def dim(self) -> int:
        return len(self.normal)


@dataclass(frozen=True)
class AffineHyperplane:
    hyperplane: Hyperplane
    offset: int = 0

    @classmethod
    def of(cls, f: FieldSpec, x, c: int = 0) -> "AffineHyperplane":
        """{v : (x, v) = c}, canonicalized by scaling x to leading 1."""
        x = np.asarray(x, dtype=np.int64)
        nz = np.flatnonzero(x)
        if nz.size == 0:
            raise FieldError("the zero vector has no orthogonal hyperplane")
        s = f.inv[x[nz[0]]]
        return cls(Hyperplane(f, tuple(int(a) for a in f.mul[s, x])), int(f.mul[s, c]))

    @property
    def field(self) -> FieldSpec:
        return self.hyperplane.field

    def to_json(self) -> dict:
        return {"normal": list(self.hyperplane.normal), "offset": self.offset}


@functools.lru_cache(maxsize=None)
def canonical_normals(q: int, n: int) -> tuple[tuple[int, ...], ...]:
    """All canonical hyperplane normals of GF(q)^n in vector-index order."""
    out = []
    for v in all_vectors(q, n):
        nz = np.flatnonzero(v)
        if nz.size and v[nz[0]] == 1:
            out.append(tuple(int(a) for a in v))
    return tuple(out)


def incidence_mask(f: FieldSpec, n: int, normal, offset: int = 0) -> np.ndarray:
    """Boolean mask of the points of GF(q)^n on {x : (normal, x) = offset}."""
    pts = all_vectors(f.q, n)
    nrm = np.asarray(normal, dtype=np.int64)
    dot = np.zeros(pts.shape[0], dtype=np.int64)
    for c in range(n):
        dot = f.add[dot, f.mul[nrm[c], pts[:, c]]]
    return dot == offset


def uncovered_mask(f: FieldSpec, n: int, normals, offsets=None) -> np.ndarray:
    """Points of GF(q)^n missed by every listed (affine) hyperplane."""
    normals = np.asarray(normals, dtype=np.int64).reshape(-1, n)
    if offsets is None:
        offsets = np.zeros(normals.shape[0], dtype=np.int64)
    return _kernels.uncovered_points(all_vectors(f.q, n), normals, np.asarray(offsets), f.add, f.mul)


def hyperplanes_cover(f: FieldSpec, n: int, normals, offsets=None) -> bool:
    """Naive membership test: does the union of x^perp (+offset) cover the space?"""
    return not uncovered_mask(f, n, normals, offsets).any()


def nowhere_zero(v) -> bool:
    return bool(np.all(np.asarray(v) != 0))


# ---------------------------------------------------------------------------
# matrix file format
# ---------------------------------------------------------------------------

@dataclass
class MatrixGF:
    field: FieldSpec
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.int64)
        if self.entries.ndim != 2:
            raise FieldError("matrix entries must be 2-d")
        if self.entries.size and (self.entries.min() < 0 or self.entries.max() >= self.field.q):
            raise FieldError(f"matrix entries must lie in [0, {self.field.q})")

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def rows(self) -> np.ndarray:
        return self.entries

    @property
    def columns(self) -> list[np.ndarray]:
        return [self.entries[:, j].copy() for j in range(self.entries.shape[1])]

    def rank(self) -> int:
        return rank(self.field, self.entries)

    def to_text(self) -> str:
        n, m = self.entries.shape
        lines = [f"{self.field.q} {n} {m}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.entries]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"q": self.field.q, "rows": self.entries.tolist()}


def parse_matrix(text: str) -> MatrixGF:
    """Read ``q n m`` + n rows, or the JSON form {"q":..,"rows":[..]}."""
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        f = field_make(int(data["q"]))
        rows = data["rows"]
        arr = np.array(rows, dtype=np.int64) if rows else np.zeros((0, 0), dtype=np.int64)
        if arr.ndim != 2:
            raise FieldError("rows must form a rectangular matrix")
        return MatrixGF(f, arr)
    lines = [ln for ln in stripped.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FieldError("empty matrix file")
    head = lines[0].split()
    if len(head) != 3:
        raise FieldError("matrix header must be 'q n m'")
    q, n, m = (int(x) for x in head)
    f = field_make(q)
    body = [[int(x) for x in ln.split()] for ln in lines[1:]]
    if len(body) != n or any(len(r) != m for r in body):
        raise FieldError(f"expected {n} rows of {m} entries")
    return MatrixGF(f, np.array(body, dtype=np.int64).reshape(n, m))
