"""Hot inner loops, each with a numba kernel and a pure-numpy twin.

The backend is picked once at import from ``COVERCRAFT_BACKEND``
(``numba`` or ``numpy``); ``numba`` is the default when it imports.
Both paths must return identical arrays; tests run them side by side.
"""
from __future__ import annotations

import contextlib
import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

BACKENDS = ("numba", "numpy")


def _initial_backend() -> str:
    name = os.environ.get("COVERCRAFT_BACKEND", "").strip().lower()
    if name == "":
        return "numba" if HAS_NUMBA else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"COVERCRAFT_BACKEND must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ImportError("COVERCRAFT_BACKEND=numba but numba is not installed")
    return name


_backend = _initial_backend()


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ImportError("numba is not installed")
    _backend = name


@contextlib.contextmanager
def using_backend(name: str):
    old = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(old)


# ---------------------------------------------------------------------------
# subset-sum parity over an abelian group (cube sets)
# ---------------------------------------------------------------------------

def _gray_parity_py(plus: np.ndarray, minus: np.ndarray) -> np.ndarray:
    # doubling: sums of all 2^k subsets, then parity of the histogram
    k, size = plus.shape
    sums = np.zeros(1, dtype=np.int64)
    for j in range(k):
        sums = np.concatenate([sums, plus[j][sums]])
    counts = np.bincount(sums, minlength=size)
    return (counts & 1).astype(np.uint8)


def _gray_parity_nb_impl(plus, minus):
    k, size = plus.shape
    out = np.zeros(size, dtype=np.uint8)
    used = np.zeros(k, dtype=np.uint8)
    cur = 0
    out[cur] ^= 1
    total = 1 << k
    for i in range(1, total):
        j = 0
        while not (i >> j) & 1:
            j += 1
        if used[j]:
            cur = minus[j, cur]
            used[j] = 0
        else:
            cur = plus[j, cur]
            used[j] = 1
        out[cur] ^= 1
    return out


def gray_parity(plus: np.ndarray, minus: np.ndarray) -> np.ndarray:
    """Parity of the number of 0-1 combinations reaching each element.

    ``plus[j]`` / ``minus[j]`` are the translation tables u -> u+x_j and
    u -> u-x_j on element indices.
    """
    plus = np.ascontiguousarray(plus, dtype=np.int64)
    minus = np.ascontiguousarray(minus, dtype=np.int64)
    if plus.shape[0] == 0:
        out = np.zeros(plus.shape[1], dtype=np.uint8)
        out[0] = 1
        return out
    if _backend == "numba":
        return _gray_parity_nb(plus, minus)
    return _gray_parity_py(plus, minus)


# ---------------------------------------------------------------------------
# union of (affine) hyperplanes over GF(q)
# ---------------------------------------------------------------------------

def _uncovered_py(vectors, normals, offsets, add, mul):
    n_points = vectors.shape[0]
    uncovered = np.ones(n_points, dtype=np.bool_)
    for r in range(normals.shape[0]):
        dot = np.zeros(n_points, dtype=np.int64)
        for c in range(normals.shape[1]):
            dot = add[dot, mul[normals[r, c], vectors[:, c]]]
        uncovered &= dot != offsets[r]
    return uncovered


def _uncovered_nb_impl(vectors, normals, offsets, add, mul):
    n_points, dim = vectors.shape
    k = normals.shape[0]
    out = np.ones(n_points, dtype=np.bool_)
    for i in range(n_points):
        for r in range(k):
            dot = 0
            for c in range(dim):
                dot = add[dot, mul[normals[r, c], vectors[i, c]]]
            if dot == offsets[r]:
                out[i] = False
                break
    return out


def uncovered_points(vectors, normals, offsets, add, mul) -> np.ndarray:
    """Boolean mask over ``vectors`` of points lying on none of the
    affine hyperplanes ``{x : (normal_r, x) = offset_r}``."""
    vectors = np.ascontiguousarray(vectors, dtype=np.int64)
    normals = np.ascontiguousarray(normals, dtype=np.int64).reshape(-1, vectors.shape[1])
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    if _backend == "numba":
        return _uncovered_nb(vectors, normals, offsets, add, mul)
    return _uncovered_py(vectors, normals, offsets, add, mul)


# ---------------------------------------------------------------------------
# AJT brute force: first nowhere-zero x with Mx nowhere zero
# ---------------------------------------------------------------------------

def _ajt_py(m, add, mul, q):
    n = m.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    # coordinate 0 varies fastest, matching the kernel's odometer
    grids = np.indices((q - 1,) * n).reshape(n, -1)[::-1].T + 1
    prod = np.zeros((grids.shape[0], n), dtype=np.int64)
    for r in range(n):
        acc = np.zeros(grids.shape[0], dtype=np.int64)
        for c in range(n):
            acc = add[acc, mul[m[r, c], grids[:, c]]]
        prod[:, r] = acc
    ok = np.all(prod != 0, axis=1)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return np.full(n, -1, dtype=np.int64)
    return grids[hits[0]].astype(np.int64)


def _ajt_nb_impl(m, add, mul, q):
    n = m.shape[0]
    x = np.ones(n, dtype=np.int64)
    while True:
        good = True
        for r in range(n):
            acc = 0
            for c in range(n):
                acc = add[acc, mul[m[r, c], x[c]]]
            if acc == 0:
                good = False
                break
        if good:
            return x
        i = 0
        while i < n and x[i] == q - 1:
            x[i] = 1
            i += 1
        if i == n:
            return np.full(n, -1, dtype=np.int64)
        x[i] += 1


def ajt_search(m, add, mul, q: int) -> np.ndarray | None:
    m = np.ascontiguousarray(m, dtype=np.int64)
    if _backend == "numba" and m.shape[0] > 0:
        x = _ajt_nb(m, add, mul, q)
    else:
        x = _ajt_py(m, add, mul, q)
    if x.size and x[0] < 0:
        return None
    return x


# ---------------------------------------------------------------------------
# nowhere-zero flow scan
# ---------------------------------------------------------------------------

def _flow_scan_py(coef, order, add, neg, lo, hi):
    n_tree, n_free = coef.shape
    idx = np.arange(lo, hi, dtype=np.int64)
    # digit 0 is most significant
    free = np.zeros((idx.size, n_free), dtype=np.int64)
    rest = idx.copy()
    for j in range(n_free - 1, -1, -1):
        free[:, j] = rest % order
        rest //= order
    nz = np.all(free != 0, axis=1) if n_free else np.ones(idx.size, dtype=np.bool_)
    zero_all = np.all(free == 0, axis=1) if n_free else np.ones(idx.size, dtype=np.bool_)
    for t in range(n_tree):
        acc = np.zeros(idx.size, dtype=np.int64)
        for j in range(n_free):
            s = coef[t, j]
            if s == 1:
                acc = add[acc, free[:, j]]
            elif s == -1:
                acc = add[acc, neg[free[:, j]]]
        nz &= acc != 0
        zero_all &= acc == 0
    hits = np.flatnonzero(nz)
    first = int(idx[hits[0]]) if hits.size else -1
    return int(nz.sum()), first, int(zero_all.sum())


def _flow_scan_nb_impl(coef, order, add, neg, lo, hi):
    n_tree, n_free = coef.shape
    free = np.zeros(n_free, dtype=np.int64)
    count = 0
    first = -1
    zeros = 0
    for idx in range(lo, hi):
        rest = idx
        for j in range(n_free - 1, -1, -1):
            free[j] = rest % order
            rest //= order
        nz = True
        allzero = True
        for j in range(n_free):
            if free[j] == 0:
                nz = False
            else:
                allzero = False
        for t in range(n_tree):
            acc = 0
            for j in range(n_free):
                s = coef[t, j]
                if s == 1:
                    acc = add[acc, free[j]]
                elif s == -1:
                    acc = add[acc, neg[free[j]]]
            if acc == 0:
                nz = False
            else:
                allzero = False
        if nz:
            count += 1
            if first < 0:
                first = idx
        if allzero:
            zeros += 1
    return count, first, zeros


def flow_scan(coef, order: int, add, neg, lo: int, hi: int) -> tuple[int, int, int]:
    """Scan flow-space indices ``[lo, hi)``.

    Returns (number of nowhere-zero flows, first nowhere-zero index or -1,
    number of flows vanishing on every edge).
    """
    coef = np.ascontiguousarray(coef, dtype=np.int64)
    if _backend == "numba":
        c, f, z = _flow_scan_nb(coef, order, add, neg, lo, hi)
        return int(c), int(f), int(z)
    return _flow_scan_py(coef, order, add, neg, lo, hi)


if HAS_NUMBA:
    _gray_parity_nb = njit(cache=True, nogil=True)(_gray_parity_nb_impl)
    _uncovered_nb = njit(cache=True, nogil=True)(_uncovered_nb_impl)
    _ajt_nb = njit(cache=True, nogil=True)(_ajt_nb_impl)
    _flow_scan_nb = njit(cache=True, nogil=True)(_flow_scan_nb_impl)
