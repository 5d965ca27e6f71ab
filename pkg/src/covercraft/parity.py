"""Characteristic-2 group algebra of (C_p)^n, cube sets and AJT tests.

Elements of (C_p)^n are indexed as in :mod:`covercraft.groups`, which is
also the vector index of GF(p)^n (coordinate 0 least significant).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .gf import FieldError, FieldSpec, MatrixGF, all_vectors, canonical_normals, field_make, rank
from .groups import FiniteAbelianGroup, bits_from_mask, is_prime, mask_from_bits

CUBE_LIMIT = 24


class ParityError(ValueError):
    pass


def _odd_prime_field(p: int) -> FieldSpec:
    if not is_prime(p):
        raise ParityError(f"parity criteria need a prime field, got q={p}")
    if p == 2:
        raise ParityError("parity criteria need an odd prime; use the naive check for p=2")
    return field_make(p)


def _vectors(xs, n: int | None = None) -> tuple[np.ndarray, int]:
    arr = np.asarray(xs, dtype=np.int64)
    if arr.size == 0:
        if n is None:
            raise ParityError("cannot infer the dimension of an empty vector list")
        return np.zeros((0, n), dtype=np.int64), n
    if arr.ndim != 2:
        raise ParityError("expected a list of vectors")
    if n is not None and arr.shape[1] != n:
        raise ParityError(f"vectors have length {arr.shape[1]}, expected {n}")
    return arr, arr.shape[1]


@dataclass(frozen=True, eq=False)
class F2GroupAlgebraElement:
    p: int
    n: int
    coeffs: np.ndarray  # bool, one entry per group element

    def __post_init__(self):
        if self.coeffs.shape != (self.p**self.n,):
            raise ParityError("coefficient vector has the wrong length")
        self.coeffs.setflags(write=False)

    @classmethod
    def zero(cls, p: int, n: int) -> "F2GroupAlgebraElement":
        return cls(p, n, np.zeros(p**n, dtype=bool))

    @classmethod
    def delta(cls, p: int, n: int, u: int) -> "F2GroupAlgebraElement":
        c = np.zeros(p**n, dtype=bool)
        c[u] = True
        return cls(p, n, c)

    @classmethod
    def one(cls, p: int, n: int) -> "F2GroupAlgebraElement":
        return cls.delta(p, n, 0)

    @property
    def group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup.elementary(self.p, self.n)

    def _check(self, other: "F2GroupAlgebraElement"):
        if (self.p, self.n) != (other.p, other.n):
            raise ParityError("group algebra elements over different groups")

    def __add__(self, other: "F2GroupAlgebraElement") -> "F2GroupAlgebraElement":
        self._check(other)
        return F2GroupAlgebraElement(self.p, self.n, self.coeffs ^ other.coeffs)

    def __mul__(self, other: "F2GroupAlgebraElement") -> "F2GroupAlgebraElement":
        return ga_multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, F2GroupAlgebraElement):
            return NotImplemented
        return (self.p, self.n) == (other.p, other.n) and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.p, self.n, self.bits))

    @property
    def bits(self) -> int:
        return bits_from_mask(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def to_hex(self) -> str:
        return f"{self.p} {self.n}\n{self.bits:x}"

    @classmethod
    def from_hex(cls, text: str) -> "F2GroupAlgebraElement":
        head, _, body = text.strip().partition("\n")
        p, n = (int(t) for t in head.split())
        return cls(p, n, mask_from_bits(int(body.strip() or "0", 16), p**n))


def ga_multiply(a: F2GroupAlgebraElement, b: F2GroupAlgebraElement) -> F2GroupAlgebraElement:
    """Convolution product with coefficients mod 2."""
    a._check(b)
    g = a.group
    out = np.zeros_like(b.coeffs)
    src = np.flatnonzero(b.coeffs)
    for u in np.flatnonzero(a.coeffs):
        out[g.translation(int(u))[src]] ^= True
    return F2GroupAlgebraElement(a.p, a.n, out)


def cover_product_zero(xs, p: int, n: int | None = None) -> bool:
    """Whether prod (delta_x + 1) vanishes in F_2[(C_p)^n]."""
    _odd_prime_field(p)
    arr, n = _vectors(xs, n)
    g = FiniteAbelianGroup.elementary(p, n)
    acc = np.zeros(p**n, dtype=bool)
    acc[0] = True
    for x in arr:
        shifted = np.zeros_like(acc)
        shifted[g.translation(g.index(x))] = acc
        acc ^= shifted
    return not acc.any()


@dataclass(frozen=True, eq=False)
class CubeSet:
    p: int
    n: int
    parity: np.ndarray  # bool over group elements
    source: tuple[tuple[int, ...], ...]

    @property
    def bits(self) -> int:
        return bits_from_mask(self.parity)

    @property
    def points(self) -> list[tuple[int, ...]]:
        vecs = all_vectors(self.p, self.n)
        return [tuple(int(c) for c in vecs[i]) for i in np.flatnonzero(self.parity)]

    def to_hex(self) -> str:
        return f"{self.p} {self.n}\n{self.bits:x}"


def cube_set(xs, p: int, n: int | None = None) -> CubeSet:
    """Points reached by an odd number of 0-1 combinations of ``xs``."""
    arr, n = _vectors(xs, n)
    if arr.shape[0] > CUBE_LIMIT:
        raise ParityError(f"cube sets are limited to {CUBE_LIMIT} vectors, got {arr.shape[0]}")
    g = FiniteAbelianGroup.elementary(p, n)
    idx = [g.index(x) for x in arr]
    size = p**n
    plus = np.array([g.translation(i) for i in idx], dtype=np.int64).reshape(len(idx), size)
    minus = np.array([g.translation(g.neg(i)) for i in idx], dtype=np.int64).reshape(len(idx), size)
    parity = _kernels.gray_parity(plus, minus).astype(bool)
    parity.setflags(write=False)
    return CubeSet(p, n, parity, tuple(tuple(int(c) % p for c in x) for x in arr))


def parity_cover_check(xs, p: int, n: int | None = None) -> bool:
    """Every point reached by an even number of 0-1 combinations."""
    _odd_prime_field(p)
    return not cube_set(xs, p, n).parity.any()


def naive_cover_check(xs, q: int, n: int | None = None) -> bool:
    """Direct check that the orthogonal hyperplanes of ``xs`` cover GF(q)^n.

    The zero vector's orthogonal complement is the whole space."""
    arr, n = _vectors(xs, n)
    f = field_make(q)
    pts = all_vectors(q, n)
    covered = np.zeros(pts.shape[0], dtype=bool)
    for x in arr:
        dot = np.zeros(pts.shape[0], dtype=np.int64)
        for c in range(n):
            dot = f.add[dot, f.mul[int(x[c]) % q, pts[:, c]]]
        covered |= dot == 0
    return bool(covered.all())


# ---------------------------------------------------------------------------
# AJT matrices
# ---------------------------------------------------------------------------

def _square(m: MatrixGF) -> int:
    rows, cols = m.shape
    if rows != cols:
        raise ParityError(f"AJT tests need a square matrix, got {rows}x{cols}")
    if rows == 0:
        raise ParityError("AJT tests need n >= 1")
    return rows


def ajt_brute(m: MatrixGF) -> np.ndarray | None:
    """First nowhere-zero x (coordinate 0 fastest) with Mx nowhere zero."""
    _square(m)
    f = m.field
    return _kernels.ajt_search(m.entries, f.add, f.mul, f.q)


def choosability_witness(m: MatrixGF, v) -> np.ndarray | None:
    """First nowhere-zero x (coordinate 0 fastest) with Mx - v nowhere zero."""
    n = _square(m)
    f = m.field
    v = np.asarray(v, dtype=np.int64).reshape(n)
    xs = all_vectors(f.q, n)
    xs = xs[np.all(xs != 0, axis=1)]
    prod = np.zeros((xs.shape[0], n), dtype=np.int64)
    for c in range(n):
        prod = f.add[prod, f.mul[m.entries[:, c][None, :], xs[:, c][:, None]]]
    hits = np.flatnonzero(np.all(f.sub[prod, v[None, :]] != 0, axis=1))
    return xs[hits[0]] if hits.size else None


def rows_cover_nowhere_zero(m: MatrixGF) -> bool:
    """Whether every nowhere-zero x is orthogonal to some row of M."""
    n = _square(m)
    f = m.field
    pts = all_vectors(f.q, n)
    pts = pts[np.all(pts != 0, axis=1)]
    prod = np.zeros((pts.shape[0], n), dtype=np.int64)
    for c in range(n):
        prod = f.add[prod, f.mul[m.entries[:, c][None, :], pts[:, c][:, None]]]
    return bool(np.any(prod == 0, axis=1).all())


def ajt_parity_shift(m: MatrixGF) -> int | None:
    """First v (element order) with |C(rows) & (C(basis) + v)| odd."""
    n = _square(m)
    f = _odd_prime_field(m.field.q)
    cx = cube_set(m.entries, f.q, n).parity
    cb = np.flatnonzero(cube_set(np.eye(n, dtype=np.int64), f.q, n).parity)
    g = FiniteAbelianGroup.elementary(f.q, n)
    for v in range(f.q**n):
        if np.count_nonzero(cx[g.translation(v)[cb]]) & 1:
            return v
    return None


def ajt_parity(m: MatrixGF) -> bool:
    return ajt_parity_shift(m) is not None


@dataclass(frozen=True)
class CombinatorialCube:
    sides: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for a, b in self.sides:
            if a == b:
                raise ParityError("each side of a combinatorial cube needs two distinct values")

    def points(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*self.sides))


def _cube_counts(cx: np.ndarray, p: int, n: int) -> tuple[np.ndarray, list[tuple[int, int]]]:
    pairs = list(itertools.combinations(range(p), 2))
    ind = np.zeros((len(pairs), p), dtype=np.int64)
    for r, (a, b) in enumerate(pairs):
        ind[r, a] = ind[r, b] = 1
    # C-order axes run from coordinate n-1 down to coordinate 0
    t = cx.astype(np.int64).reshape((p,) * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(ind, t, axes=([1], [axis])), 0, axis)
    return t, pairs


def ajt_cube_witness(m: MatrixGF) -> CombinatorialCube | None:
    """First combinatorial cube meeting C(rows) in an odd number of points.

    Rescaling the coordinates of C(basis) + v gives exactly the
    combinatorial cubes, so this scans them all at once."""
    n = _square(m)
    f = _odd_prime_field(m.field.q)
    cx = cube_set(m.entries, f.q, n).parity
    counts, pairs = _cube_counts(cx, f.q, n)
    odd = np.flatnonzero(counts.ravel() & 1)
    if odd.size == 0:
        return None
    choice = np.unravel_index(int(odd[0]), counts.shape)
    # choice[axis] is the pair for coordinate n-1-axis
    return CombinatorialCube(tuple(pairs[int(choice[n - 1 - i])] for i in range(n)))


def ajt_cube(m: MatrixGF) -> bool:
    return ajt_cube_witness(m) is not None


def cube_intersection(cube: CombinatorialCube, cs: CubeSet) -> int:
    g = FiniteAbelianGroup.elementary(cs.p, cs.n)
    return sum(bool(cs.parity[g.index(pt)]) for pt in cube.points())


# ---------------------------------------------------------------------------
# two independent hyperplane families
# ---------------------------------------------------------------------------

@dataclass
class TwoFamilyCover:
    p: int
    n: int
    first: list[tuple[int, ...]]
    second: list[tuple[int, ...]]
    matrix: MatrixGF
    matrix_is_ajt: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "family1": [list(x) for x in self.first],
            "family2": [list(x) for x in self.second],
            "non_ajt_matrix": self.matrix.to_json(),
            "matrix_is_ajt": self.matrix_is_ajt,
        }


def two_family_cover_search(n: int, p: int) -> TwoFamilyCover | None:
    """Two independent families of n hyperplanes covering GF(p)^n.

    GL(n, p) moves any basis to the standard one, so the first family is
    fixed to the coordinate hyperplanes. A hit gives the non-AJT matrix
    whose rows are the second family's normals."""
    if n < 1:
        raise ParityError("n must be >= 1")
    f = field_make(p)
    if not f.is_prime:
        raise FieldError(f"two-family search is over prime fields, got q={p}")
    first = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    pts = all_vectors(p, n)
    outside_first = pts[np.all(pts != 0, axis=1)]
    for combo in itertools.combinations(canonical_normals(p, n), n):
        rows = np.array(combo, dtype=np.int64)
        if rank(f, rows) < n:
            continue
        prod = np.zeros((outside_first.shape[0], n), dtype=np.int64)
        for c in range(n):
            prod = f.add[prod, f.mul[rows[:, c][None, :], outside_first[:, c][:, None]]]
        if np.any(prod == 0, axis=1).all():
            mat = MatrixGF(f, rows)
            witness = ajt_brute(mat)
            if witness is not None:
                raise AssertionError("covering families produced an AJT matrix")
            return TwoFamilyCover(p, n, first, list(combo), mat, False)
    return None
