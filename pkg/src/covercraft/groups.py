"""Finite abelian groups given as explicit direct products of cyclic groups.

Elements are addressed by a mixed-radix index (coordinate 0 is the least
significant digit). Subgroups and cosets are stored as Python-int bitsets
over those indices, so intersection and union are single integer ops.
"""
from __future__ import annotations

import functools
import math
import os
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ELEMENT_LIMIT = 4096


class GroupError(ValueError):
    """Malformed group description or an operation outside its domain."""


def element_limit() -> int:
    raw = os.environ.get("COVERCRAFT_LIMIT")
    if raw is None or raw.strip() == "":
        return DEFAULT_ELEMENT_LIMIT
    return int(raw)


def factorize(n: int) -> dict[int, int]:
    if n <= 0:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def lambda_of(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    return sum(factorize(n).values())


def tau_of(n: int) -> int:
    """Sum of alpha_i * (p_i - 1) over the factorization of ``n``."""
    return sum(a * (p - 1) for p, a in factorize(n).items())


# ---------------------------------------------------------------------------
# bitset helpers
# ---------------------------------------------------------------------------

def bits_from_indices(indices: Iterable[int]) -> int:
    arr = np.fromiter(indices, dtype=np.int64)
    if arr.size == 0:
        return 0
    mask = np.zeros(int(arr.max()) + 1, dtype=np.uint8)
    mask[arr] = 1
    return bits_from_mask(mask)


def bits_from_mask(mask: np.ndarray) -> int:
    packed = np.packbits(np.asarray(mask, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def mask_from_bits(bits: int, size: int) -> np.ndarray:
    raw = bits.to_bytes((size + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size].astype(bool)


def indices_of(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def popcount(bits: int) -> int:
    return bin(bits).count("1")


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteAbelianGroup:
    cyclic_orders: tuple[int, ...]
    element_count_limit: int = field(default_factory=element_limit, compare=False)

    def __post_init__(self):
        orders = tuple(int(m) for m in self.cyclic_orders)
        object.__setattr__(self, "cyclic_orders", orders)
        if any(m < 2 for m in orders):
            raise GroupError(f"cyclic orders must be >= 2, got {orders}")
        if self.order > self.element_count_limit:
            raise GroupError(f"group order {self.order} exceeds limit {self.element_count_limit}")

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @property
    def identity(self) -> int:
        return 0

    @functools.cached_property
    def weights(self) -> np.ndarray:
        w = np.ones(self.rank, dtype=np.int64)
        for i in range(1, self.rank):
            w[i] = w[i - 1] * self.cyclic_orders[i - 1]
        return w

    @functools.cached_property
    def coords(self) -> np.ndarray:
        """(order, rank) array of coordinates of every element."""
        idx = np.arange(self.order, dtype=np.int64)
        out = np.empty((self.order, self.rank), dtype=np.int64)
        for i, m in enumerate(self.cyclic_orders):
            out[:, i] = (idx // self.weights[i]) % m
        return out

    @property
    def all_bits(self) -> int:
        return (1 << self.order) - 1

    def __str__(self) -> str:
        return "*".join(f"C{m}" for m in self.cyclic_orders) or "C1"

    def index(self, element: Sequence[int]) -> int:
        if len(element) != self.rank:
            raise GroupError(f"element {tuple(element)} has wrong length for {self}")
        return int(sum((int(e) % m) * int(w) for e, m, w in zip(element, self.cyclic_orders, self.weights)))

    def element(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.order:
            raise GroupError(f"index {index} out of range for {self}")
        return tuple(int(c) for c in self.coords[index])

    def encode(self, coords: np.ndarray) -> np.ndarray:
        orders = np.asarray(self.cyclic_orders, dtype=np.int64)
        return (np.asarray(coords) % orders) @ self.weights

    def add(self, a: int, b: int) -> int:
        return int(self.encode(self.coords[a] + self.coords[b]))

    def neg(self, a: int) -> int:
        return int(self.encode(-self.coords[a]))

    def translation(self, t: int) -> np.ndarray:
        """Index table u -> u + t."""
        return _translation(self, t)

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        if self.order > 256:
            raise GroupError("full addition table only built for order <= 256")
        return np.stack([self.translation(t) for t in range(self.order)])

    @functools.cached_property
    def neg_table(self) -> np.ndarray:
        return self.encode(-self.coords)

    def element_order(self, a: int) -> int:
        c = self.coords[a]
        out = 1
        for ci, m in zip(c, self.cyclic_orders):
            out = math.lcm(out, m // math.gcd(int(ci), m))
        return out

    def translate_bits(self, bits: int, t: int) -> int:
        if t == 0:
            return bits
        idx = np.asarray(indices_of(bits), dtype=np.int64)
        return bits_from_indices(self.translation(t)[idx]) if idx.size else 0

    @classmethod
    def elementary(cls, p: int, n: int) -> "FiniteAbelianGroup":
        return cls((p,) * n)


@functools.lru_cache(maxsize=8192)
def _translation(group: FiniteAbelianGroup, t: int) -> np.ndarray:
    out = group.encode(group.coords + group.coords[t])
    out.setflags(write=False)
    return out


_CYCLIC_RE = re.compile(r"^C(\d+)$")


def parse_group(spec: str, limit: int | None = None) -> FiniteAbelianGroup:
    """Parse ``C2*C2*C3`` or ``2,2,3`` into a group."""
    text = re.sub(r"\s+", "", spec or "")
    if not text:
        raise GroupError("empty group spec")
    if "," in text or text.isdigit():
        parts = text.split(",")
        if any(not p.isdigit() for p in parts):
            raise GroupError(f"malformed group spec {spec!r}")
        orders = [int(p) for p in parts]
    else:
        orders = []
        for part in text.split("*"):
            m = _CYCLIC_RE.match(part)
            if m is None:
                raise GroupError(f"malformed group spec {spec!r}")
            orders.append(int(m.group(1)))
    if any(m < 2 for m in orders):
        raise GroupError(f"cyclic orders must be >= 2 in {spec!r}")
    kwargs = {} if limit is None else {"element_count_limit": limit}
    return FiniteAbelianGroup(tuple(orders), **kwargs)


def trivial_group() -> FiniteAbelianGroup:
    return FiniteAbelianGroup(())


# ---------------------------------------------------------------------------
# subgroups and cosets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    group: FiniteAbelianGroup
    member_bits: int
    generators: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.member_bits & 1:
            raise GroupError("subgroup must contain the identity")
        if self.group.order % self.size:
            raise GroupError(f"subgroup of size {self.size} cannot live in a group of order {self.group.order}")

    @property
    def size(self) -> int:
        return popcount(self.member_bits)

    @property
    def index(self) -> int:
        return self.group.order // self.size

    @property
    def elements(self) -> list[int]:
        return indices_of(self.member_bits)

    def __contains__(self, element: int) -> bool:
        return bool(self.member_bits >> element & 1)

    def is_trivial(self) -> bool:
        return self.member_bits == 1

    def is_closed(self) -> bool:
        elems = self.elements
        for a in elems:
            if self.group.neg(a) not in self:
                return False
            if self.group.translate_bits(self.member_bits, a) != self.member_bits:
                return False
        return True

    def coset(self, representative: int) -> "Coset":
        return Coset.make(self, representative)

    def cosets(self) -> list["Coset"]:
        seen = 0
        out = []
        for r in range(self.group.order):
            if seen >> r & 1:
                continue
            c = Coset.make(self, r)
            seen |= c.bits
            out.append(c)
        return out


@dataclass(frozen=True)
class Coset:
    subgroup: Subgroup
    representative: int
    bits: int = field(compare=False, repr=False)

    @classmethod
    def make(cls, subgroup: Subgroup, element: int) -> "Coset":
        bits = subgroup.group.translate_bits(subgroup.member_bits, element)
        rep = (bits & -bits).bit_length() - 1
        return cls(subgroup, rep, bits)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.subgroup.group

    @property
    def size(self) -> int:
        return self.subgroup.size

    @property
    def elements(self) -> list[int]:
        return indices_of(self.bits)

    def __contains__(self, element: int) -> bool:
        return bool(self.bits >> element & 1)

    def translate(self, t: int) -> "Coset":
        return Coset.make(self.subgroup, self.group.add(self.representative, t))

    def to_json(self) -> dict:
        return {"subgroup_elements": self.subgroup.elements, "representative": self.representative}


def _closure_with(group: FiniteAbelianGroup, bits: int, g: int) -> int:
    """Bits of <H, g> where H is the subgroup with ``bits``."""
    members = np.asarray(indices_of(bits), dtype=np.int64)
    out = bits
    cur = g
    while not (out >> cur) & 1:
        out |= bits_from_indices(group.translation(cur)[members])
        cur = group.add(cur, g)
    return out


def subgroup_generated(group: FiniteAbelianGroup, gens: Iterable[int | Sequence[int]]) -> Subgroup:
    gen_idx = []
    for g in gens:
        gi = g if isinstance(g, (int, np.integer)) else group.index(g)
        if not 0 <= gi < group.order:
            raise GroupError(f"generator {g} not in {group}")
        gen_idx.append(int(gi))
    bits = 1
    for g in gen_idx:
        bits = _closure_with(group, bits, g)
    return Subgroup(group, bits, tuple(gen_idx))


def trivial_subgroup(group: FiniteAbelianGroup) -> Subgroup:
    return Subgroup(group, 1, ())


def whole_group(group: FiniteAbelianGroup) -> Subgroup:
    return Subgroup(group, group.all_bits, None)


def enumerate_subgroups(group: FiniteAbelianGroup) -> list[Subgroup]:
    """All subgroups, sorted by (size, member_bits)."""
    return list(_enumerate_subgroups(group))


@functools.lru_cache(maxsize=64)
def _enumerate_subgroups(group: FiniteAbelianGroup) -> tuple[Subgroup, ...]:
    if group.order > group.element_count_limit:
        raise GroupError(f"group order {group.order} exceeds limit")
    found = {1: ()}
    frontier = [1]
    while frontier:
        nxt = []
        for bits in frontier:
            gens = found[bits]
            tried = bits
            for g in range(group.order):
                if tried >> g & 1:
                    continue
                new = _closure_with(group, bits, g)
                # every element of the coset H+g yields the same extension
                tried |= group.translate_bits(bits, g)
                if new not in found:
                    found[new] = gens + (g,)
                    nxt.append(new)
        frontier = nxt
    subs = [Subgroup(group, b, gens) for b, gens in found.items()]
    subs.sort(key=lambda s: (s.size, s.member_bits))
    return tuple(subs)


def intersect_subgroups(hs: Sequence[Subgroup]) -> Subgroup:
    if not hs:
        raise GroupError("intersection of an empty list of subgroups")
    group = hs[0].group
    bits = group.all_bits
    for h in hs:
        if h.group != group:
            raise GroupError("subgroups live in different groups")
        bits &= h.member_bits
    return Subgroup(group, bits)


def as_subgroup(group: FiniteAbelianGroup, bits: int) -> Subgroup:
    """Validate that ``bits`` is closed under the group law."""
    sub = Subgroup(group, bits)
    if not sub.is_closed():
        raise GroupError("element set is not a subgroup")
    return sub


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------

def _smith_columns(rel: np.ndarray) -> tuple[list[int], np.ndarray]:
    """Diagonal of the Smith form of integer matrix ``rel`` (relations as
    rows) together with the unimodular column transform V so that the row
    lattice of ``rel @ V`` is spanned by the diagonal."""
    a = [list(map(int, row)) for row in rel]
    rows, cols = len(a), len(a[0]) if a else 0
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def col_op(dst, src, factor):  # col[dst] -= factor * col[src]
        for r in range(rows):
            a[r][dst] -= factor * a[r][src]
        for r in range(cols):
            v[r][dst] -= factor * v[r][src]

    def col_swap(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def row_op(dst, src, factor):
        a[dst] = [x - factor * y for x, y in zip(a[dst], a[src])]

    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[r][c]), r, c) for r in range(t, rows) for c in range(t, cols) if a[r][c]]
        if not nz:
            break
        _, r, c = min(nz)
        a[t], a[r] = a[r], a[t]
        col_swap(t, c)
        while True:
            done = True
            for r in range(t + 1, rows):
                if a[r][t]:
                    f = a[r][t] // a[t][t]
                    row_op(r, t, f)
                    if a[r][t]:
                        a[t], a[r] = a[r], a[t]
                        done = False
            for c in range(t + 1, cols):
                if a[t][c]:
                    f = a[t][c] // a[t][t]
                    col_op(c, t, f)
                    if a[t][c]:
                        col_swap(t, c)
                        done = False
            if not done:
                continue
            # divisibility condition
            bad = [(r, c) for r in range(t + 1, rows) for c in range(t + 1, cols) if a[r][c] % a[t][t]]
            if not bad:
                break
            r, _ = bad[0]
            a[t] = [x + y for x, y in zip(a[t], a[r])]
        diag.append(abs(a[t][t]))
        t += 1
    diag += [0] * (cols - len(diag))
    return diag, np.array(v, dtype=object)


@dataclass(frozen=True)
class QuotientMap:
    source: FiniteAbelianGroup
    kernel: Subgroup
    target: FiniteAbelianGroup
    table: np.ndarray = field(compare=False, repr=False)

    def __call__(self, element: int) -> int:
        return int(self.table[element])

    def image_bits(self, bits: int) -> int:
        idx = np.asarray(indices_of(bits), dtype=np.int64)
        return bits_from_indices(self.table[idx]) if idx.size else 0

    def push_coset(self, coset: Coset) -> Coset:
        sub = Subgroup(self.target, self.image_bits(coset.subgroup.member_bits))
        return Coset.make(sub, self(coset.representative))

    def push_subgroup(self, sub: Subgroup) -> Subgroup:
        return Subgroup(self.target, self.image_bits(sub.member_bits))


def _small_generating_set(sub: Subgroup) -> list[int]:
    gens: list[int] = []
    bits = 1
    for e in sub.elements:
        if not bits >> e & 1:
            gens.append(e)
            bits = _closure_with(sub.group, bits, e)
    return gens


def quotient(group: FiniteAbelianGroup, m: Subgroup) -> QuotientMap:
    """Quotient by ``m``, target presented by its invariant factors."""
    if m.group != group:
        raise GroupError("kernel lives in another group")
    if not m.is_closed():
        raise GroupError("kernel is not a subgroup")
    n = group.rank
    if n == 0:
        return QuotientMap(group, m, group, np.zeros(1, dtype=np.int64))
    rel = [[group.cyclic_orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
    rel += [list(group.element(g)) for g in _small_generating_set(m)]
    diag, v = _smith_columns(np.array(rel, dtype=object))
    keep = [i for i, d in enumerate(diag) if d != 1]
    target = FiniteAbelianGroup(tuple(diag[i] for i in keep), element_count_limit=group.element_count_limit)
    coords = group.coords.astype(object) @ v
    img = np.zeros((group.order, len(keep)), dtype=np.int64)
    for out_i, i in enumerate(keep):
        img[:, out_i] = np.array([int(x) % diag[i] for x in coords[:, i]], dtype=np.int64)
    table = target.encode(img) if keep else np.zeros(group.order, dtype=np.int64)
    qm = QuotientMap(group, m, target, np.asarray(table, dtype=np.int64))
    if target.order * m.size != group.order:
        raise AssertionError("quotient order mismatch")
    return qm


def cyclic_prime_power_separator(group: FiniteAbelianGroup, h: Subgroup, g: int) -> Subgroup:
    """A maximal K with H <= K and g not in K; G/K is then cyclic of prime-power order."""
    if g in h:
        raise GroupError("g lies in H")
    bits = h.member_bits
    for e in range(group.order):
        if bits >> e & 1 or e == g:
            continue
        new = _closure_with(group, bits, e)
        if not new >> g & 1:
            bits = new
    k = Subgroup(group, bits)
    q = quotient(group, k).target
    if q.rank > 1 or len(factorize(q.order)) != 1:
        raise AssertionError(f"separator quotient {q} is not cyclic of prime-power order")
    return k


def abelian_groups_up_to(max_order: int, min_order: int = 2) -> list[FiniteAbelianGroup]:
    """Every non-decreasing cyclic decomposition with product in range."""
    out = []

    def rec(prefix: tuple[int, ...], prod: int, lo: int):
        if prefix and prod >= min_order:
            out.append(FiniteAbelianGroup(prefix))
        m = lo
        while prod * m <= max_order:
            rec(prefix + (m,), prod * m, m)
            m += 1

    rec((), 1, 2)
    out.sort(key=lambda g: (g.order, g.cyclic_orders))
    return out
