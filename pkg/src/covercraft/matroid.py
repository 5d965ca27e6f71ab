"""Linear matroids over GF(q) and disjoint base packing."""
from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldSpec, MatrixGF, rank

EDMONDS_EXACT_LIMIT = 12
MINIMAL_SEARCH_LIMIT = 16


class MatroidError(ValueError):
    pass


@dataclass(eq=False)
class LinearMatroid:
    """Column matroid of an n x m matrix; the ground set is its columns,
    repeats allowed."""

    field: FieldSpec
    vectors: np.ndarray  # one row per ground element
    _ranks: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.int64)
        if self.vectors.ndim != 2:
            raise MatroidError("ground vectors must form a 2-d array")
        if self.vectors.size and (self.vectors.min() < 0 or self.vectors.max() >= self.field.q):
            raise MatroidError(f"entries must lie in [0, {self.field.q})")

    @classmethod
    def from_matrix(cls, m: MatrixGF) -> "LinearMatroid":
        return cls(m.field, m.entries.T.copy())

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def ground(self) -> tuple[int, ...]:
        return tuple(range(self.size))

    def rank(self, subset: Iterable[int]) -> int:
        key = 0
        for i in subset:
            if not 0 <= i < self.size:
                raise MatroidError(f"index {i} outside the ground set")
            key |= 1 << i
        r = self._ranks.get(key)
        if r is None:
            rows = [i for i in range(self.size) if key >> i & 1]
            r = rank(self.field, self.vectors[rows]) if rows else 0
            self._ranks[key] = r
        return r

    def independent(self, subset: Sequence[int]) -> bool:
        return self.rank(subset) == len(subset)


def rank_subset(m: LinearMatroid, subset: Iterable[int]) -> int:
    return m.rank(subset)


@dataclass
class BasePacking:
    subset: tuple[int, ...]
    bases: list[tuple[int, ...]]

    def to_json(self) -> dict:
        return {"subset": list(self.subset), "bases": [list(b) for b in self.bases]}


def check_packing(m: LinearMatroid, packing: BasePacking) -> bool:
    r = m.rank(packing.subset)
    used: set[int] = set()
    for b in packing.bases:
        if len(b) != r or not m.independent(b) or used & set(b) or not set(b) <= set(packing.subset):
            return False
        used |= set(b)
    return True


def edmonds_bound(m: LinearMatroid, subset: Sequence[int]) -> int:
    """min over Y in X with r(Y) < r(X) of floor((|X|-|Y|) / (r(X)-r(Y)))."""
    xs = tuple(subset)
    rx = m.rank(xs)
    if rx == 0:
        raise MatroidError("r(X) = 0: every subset has zero rank")
    best = len(xs) // rx  # Y = empty set
    for size in range(1, len(xs)):
        for ys in itertools.combinations(xs, size):
            ry = m.rank(ys)
            if ry < rx:
                best = min(best, (len(xs) - size) // (rx - ry))
    return best


def _partition(m: LinearMatroid, xs: Sequence[int], k: int) -> list[list[int]]:
    """Greedy matroid partition into k independent sets using shortest
    augmenting paths; the union is a basis of the k-fold union matroid."""
    sets: list[list[int]] = [[] for _ in range(k)]
    owner: dict[int, int] = {}
    for s in xs:
        prev: dict[int, int] = {}
        seen = {s}
        queue = deque([s])
        done = False
        while queue and not done:
            x = queue.popleft()
            for j in range(k):
                if owner.get(x) == j:
                    continue
                if m.independent(sets[j] + [x]):
                    # walk the path back: each element enters the set its
                    # successor vacated
                    cur, target = x, j
                    while True:
                        old = owner.get(cur)
                        if old is not None:
                            sets[old].remove(cur)
                        sets[target].append(cur)
                        owner[cur] = target
                        if cur == s:
                            break
                        cur, target = prev[cur], old
                    done = True
                    break
            if done:
                break
            for j in range(k):
                if owner.get(x) == j:
                    continue
                for y in sets[j]:
                    if y in seen:
                        continue
                    swapped = [z for z in sets[j] if z != y] + [x]
                    if m.independent(swapped):
                        seen.add(y)
                        prev[y] = x
                        queue.append(y)
    return sets


def max_disjoint_bases(m: LinearMatroid, subset: Sequence[int] | None = None) -> tuple[int, BasePacking]:
    """Largest number of pairwise disjoint bases of X, with a packing."""
    xs = tuple(sorted(set(m.ground() if subset is None else subset)))
    rx = m.rank(xs)
    if rx == 0:
        raise MatroidError("r(X) = 0: no basis to pack")
    for k in range(len(xs) // rx, 0, -1):
        sets = _partition(m, xs, k)
        if all(len(s) == rx for s in sets):
            packing = BasePacking(xs, [tuple(sorted(s)) for s in sets])
            break
    else:  # pragma: no cover - k = 1 always succeeds
        raise AssertionError("no basis found")
    if len(xs) <= EDMONDS_EXACT_LIMIT:
        bound = edmonds_bound(m, xs)
        if bound != k:
            raise AssertionError(f"packing {k} disagrees with the Edmonds minimum {bound}")
    return k, packing


def brute_force_packing_number(m: LinearMatroid, subset: Sequence[int] | None = None) -> int:
    """Exhaustive maximum over families of disjoint bases (oracle)."""
    xs = tuple(sorted(set(m.ground() if subset is None else subset)))
    rx = m.rank(xs)
    if rx == 0:
        raise MatroidError("r(X) = 0: no basis to pack")
    bases = [b for b in itertools.combinations(xs, rx) if m.independent(b)]
    masks = [sum(1 << i for i in b) for b in bases]

    @functools.lru_cache(maxsize=None)
    def best(rem: int) -> int:
        if not rem:
            return 0
        low = rem & -rem
        out = best(rem & ~low)
        for bm in masks:
            if bm & low and bm & rem == bm:
                out = max(out, 1 + best(rem & ~bm))
        return out

    return best(sum(1 << i for i in xs))


def _dense_enough(m: LinearMatroid, xs: Sequence[int], k: int) -> bool:
    r = m.rank(xs)
    return r >= 1 and len(xs) >= r * k


@dataclass
class PackingSubset:
    k: int
    subset: tuple[int, ...]
    packing: BasePacking
    hypothesis: bool  # |E| >= r(E) k

    def to_json(self) -> dict:
        return {"k": self.k, "hypothesis_holds": self.hypothesis, **self.packing.to_json()}


def packing_subset(m: LinearMatroid, k: int) -> PackingSubset | None:
    """A subset X with k disjoint bases, chosen minimal among subsets with
    r(X) >= 1 and |X| >= r(X) k.

    For ground sets up to 16 elements the smallest such X is found by
    exhaustive search (smallest size first, then lexicographic), so no
    proper nonzero-rank Y in X satisfies |Y| >= r(Y) k. Larger ground
    sets are thinned greedily instead."""
    if k < 1:
        raise MatroidError("k must be >= 1")
    ground = m.ground()
    hypothesis = _dense_enough(m, ground, k)
    if m.size <= MINIMAL_SEARCH_LIMIT:
        candidates = (
            xs
            for size in range(1, m.size + 1)
            for xs in itertools.combinations(ground, size)
            if _dense_enough(m, xs, k)
        )
    else:
        candidates = iter([_greedy_thin(m, k)] if hypothesis else [])
    for xs in candidates:
        value, packing = max_disjoint_bases(m, xs)
        if value >= k:
            packing = BasePacking(packing.subset, packing.bases[:k])
            return PackingSubset(k, tuple(xs), packing, hypothesis)
    return None


def _greedy_thin(m: LinearMatroid, k: int) -> tuple[int, ...]:
    xs = list(m.ground())
    changed = True
    while changed:
        changed = False
        for i in list(xs):
            rest = [j for j in xs if j != i]
            if rest and _dense_enough(m, rest, k):
                xs = rest
                changed = True
    return tuple(xs)


def count_minimal(m: LinearMatroid, subset: Sequence[int], k: int) -> bool:
    """Every proper Y in X with 1 <= r(Y) < r(X) has |Y| < r(Y) k."""
    xs = tuple(subset)
    rx = m.rank(xs)
    for size in range(1, len(xs)):
        for ys in itertools.combinations(xs, size):
            ry = m.rank(ys)
            if 1 <= ry < rx and size >= ry * k:
                return False
    return True
