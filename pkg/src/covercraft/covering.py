"""Coset systems, cover audits and exhaustive minimal-cover search.

All searches share one depth-first engine over Python-int bitsets. It
always branches on the lowest-index uncovered element, which makes it
complete for irredundant covers: every irredundant cover is reached
exactly when its last member is chosen, because no proper sub-family of
it can cover the target.
"""
from __future__ import annotations

import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .gf import all_vectors, canonical_normals, field_make, incidence_mask
from .groups import (
    Coset,
    FiniteAbelianGroup,
    GroupError,
    Subgroup,
    bits_from_indices,
    bits_from_mask,
    enumerate_subgroups,
    factorize,
    indices_of,
    intersect_subgroups,
    lambda_of,
    popcount,
    tau_of,
    whole_group,
)


class Unattainable:
    """No covering of the requested kind exists (the value is infinite)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNATTAINABLE"

    def __str__(self):
        return "unattainable"


UNATTAINABLE = Unattainable()


class BudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_cosets: int | None = None
    node_limit: int = 10**7
    time_limit: float | None = None
    workers: int = 1

    def __post_init__(self):
        for name in ("max_cosets", "node_limit", "time_limit"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise ValueError(f"{name} must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


# ---------------------------------------------------------------------------
# coset systems and audits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CosetSystem:
    group: FiniteAbelianGroup
    cosets: tuple[Coset, ...]

    def __post_init__(self):
        object.__setattr__(self, "cosets", tuple(self.cosets))
        for c in self.cosets:
            if c.group != self.group:
                raise GroupError("coset from a different group")

    def __len__(self):
        return len(self.cosets)

    def __iter__(self):
        return iter(self.cosets)

    @property
    def union_bits(self) -> int:
        out = 0
        for c in self.cosets:
            out |= c.bits
        return out

    def translate(self, t: int) -> "CosetSystem":
        return CosetSystem(self.group, tuple(c.translate(t) for c in self.cosets))

    def subgroup_intersection(self) -> Subgroup:
        if not self.cosets:
            return whole_group(self.group)
        return intersect_subgroups([c.subgroup for c in self.cosets])

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.cosets]


@dataclass(frozen=True)
class CoverReport:
    covers_target: bool
    uncovered_witness: int | None
    removable_indices: tuple[int, ...]
    subgroup_intersection: Subgroup

    @property
    def irredundant(self) -> bool:
        return not self.removable_indices

    def to_json(self) -> dict:
        return {
            "covers_target": self.covers_target,
            "uncovered_witness": self.uncovered_witness,
            "removable_indices": list(self.removable_indices),
            "irredundant": self.irredundant,
            "subgroup_intersection": self.subgroup_intersection.elements,
        }


def _target_bits(group: FiniteAbelianGroup, target) -> int:
    if target is None:
        return group.all_bits
    if isinstance(target, int):
        return target
    bits = 0
    for t in target:
        t = t if isinstance(t, int) else group.index(t)
        if not 0 <= t < group.order:
            raise GroupError(f"target element {t} outside the group")
        bits |= 1 << t
    return bits


def audit(system: CosetSystem, target=None) -> CoverReport:
    """Exact coverage audit; ``target`` is a set of element indices or a
    bitset (default: the whole group)."""
    tbits = _target_bits(system.group, target)
    union = system.union_bits
    missing = tbits & ~union
    witness = (missing & -missing).bit_length() - 1 if missing else None
    removable = []
    for i in range(len(system.cosets)):
        rest = 0
        for j, c in enumerate(system.cosets):
            if j != i:
                rest |= c.bits
        if tbits & ~rest == 0:
            removable.append(i)
    return CoverReport(missing == 0, witness, tuple(removable), system.subgroup_intersection())


def punctured_target(group: FiniteAbelianGroup) -> int:
    return group.all_bits & ~1


# ---------------------------------------------------------------------------
# generic irredundant cover search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    bits: int
    tag: object
    direction: int = 0  # bits of the underlying subgroup / hyperplane


@dataclass
class SearchOutcome:
    chosen: list[Candidate] | None
    nodes: int
    status: str  # "found", "none", "exhausted"


class _Cancelled(Exception):
    pass


class _Counter:
    __slots__ = ("nodes", "limit", "deadline", "cancelled")

    def __init__(self, limit: int, deadline: float | None, cancelled: Callable[[], bool] | None = None):
        self.nodes = 0
        self.limit = limit
        self.deadline = deadline
        self.cancelled = cancelled

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExhausted
        if not self.nodes & 255:
            if self.cancelled is not None and self.cancelled():
                raise _Cancelled
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise BudgetExhausted


class CoverProblem:
    """Cover ``target`` by at most k candidate sets, irredundantly.

    ``candidates_for(u)`` lists the sets containing element u in branch
    order; ``leaf_ok`` filters complete covers (e.g. trivial intersection).
    """

    def __init__(
        self,
        target: int,
        candidates_for: Callable[[int], Sequence[Candidate]],
        max_size: int,
        leaf_ok: Callable[[list[Candidate]], bool] | None = None,
        irredundant: bool = True,
        largest_first: bool = False,
    ):
        self.target = target
        self.candidates_for = candidates_for
        self.max_size = max(1, max_size)
        self.leaf_ok = leaf_ok
        self.irredundant = irredundant
        # only sound when the problem is translation invariant: some
        # translate of any solution has its largest member at the root
        self.largest_first = largest_first

    def _dfs(self, covered: int, chosen: list[Candidate], privates: list[int], k: int, cap: int, counter: _Counter):
        counter.tick()
        missing = self.target & ~covered
        if not missing:
            if self.leaf_ok is None or self.leaf_ok(chosen):
                return list(chosen)
            return None
        slots = k - len(chosen)
        if slots <= 0 or popcount(missing) > slots * cap:
            return None
        u = (missing & -missing).bit_length() - 1
        for cand in self.candidates_for(u):
            if self.largest_first and popcount(cand.bits) > cap:
                continue
            new_privates = self._extend_privates(privates, cand, covered)
            if new_privates is None:
                continue
            chosen.append(cand)
            found = self._dfs(covered | cand.bits, chosen, new_privates, k, cap, counter)
            chosen.pop()
            if found is not None:
                return found
        return None

    def _extend_privates(self, privates: list[int], cand: Candidate, covered: int) -> list[int] | None:
        if not self.irredundant:
            return privates
        out = []
        for p in privates:
            p &= ~cand.bits
            if not p:
                return None
            out.append(p)
        out.append(cand.bits & self.target & ~covered)
        return out

    def _run_branch(self, cand: Candidate, k: int, limit: int, deadline: float | None,
                    cancelled: Callable[[], bool] | None = None) -> SearchOutcome:
        counter = _Counter(limit, deadline, cancelled)
        try:
            counter.tick()  # the root node is charged to every branch's count once
            privates = self._extend_privates([], cand, 0)
            cap = popcount(cand.bits) if self.largest_first else self.max_size
            found = self._dfs(cand.bits, [cand], privates, k, cap, counter)
        except BudgetExhausted:
            return SearchOutcome(None, counter.nodes, "exhausted")
        except _Cancelled:
            return SearchOutcome(None, counter.nodes, "cancelled")
        return SearchOutcome(found, counter.nodes, "found" if found is not None else "none")

    def solve(self, k: int, node_limit: int, deadline: float | None = None, workers: int = 1) -> SearchOutcome:
        """Look for a cover of size <= k. Deterministic in ``workers``:
        branches are merged in root-candidate order and the node budget
        is charged cumulatively in that order."""
        if not self.target:
            ok = self.leaf_ok is None or self.leaf_ok([])
            return SearchOutcome([] if ok else None, 1, "found" if ok else "none")
        if k <= 0:
            return SearchOutcome(None, 1, "none")
        u = (self.target & -self.target).bit_length() - 1
        roots = list(self.candidates_for(u))
        total = 0
        if workers > 1 and len(roots) > 1:
            # a branch is abandoned once an earlier one has found a cover;
            # the merge below never reads past that earlier branch
            first_hit = [len(roots)]
            lock = threading.Lock()

            def run(i: int) -> SearchOutcome:
                out = self._run_branch(roots[i], k, node_limit, deadline, lambda: first_hit[0] < i)
                if out.status == "found":
                    with lock:
                        first_hit[0] = min(first_hit[0], i)
                return out

            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(run, range(len(roots))))
            for out in outcomes:
                if out.status == "exhausted" or total + out.nodes > node_limit:
                    return SearchOutcome(None, min(total + out.nodes, node_limit), "exhausted")
                total += out.nodes
                if out.status == "found":
                    return SearchOutcome(out.chosen, total, "found")
            return SearchOutcome(None, total, "none")
        for cand in roots:
            out = self._run_branch(cand, k, node_limit - total, deadline)
            if out.status == "exhausted":
                return SearchOutcome(None, min(total + out.nodes, node_limit), "exhausted")
            total += out.nodes
            if out.status == "found":
                return SearchOutcome(out.chosen, total, "found")
        return SearchOutcome(None, total, "none")

    def minimize(self, k_min: int, k_max: int, budget: SearchBudget) -> tuple[int | None, list[Candidate] | None, int, str]:
        """Iterative deepening; returns (k, witness, nodes, status) with
        status "exact", "none" (nothing up to k_max) or "inconclusive"."""
        deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
        nodes = 0
        for k in range(max(0, k_min), k_max + 1):
            out = self.solve(k, budget.node_limit - nodes, deadline, budget.workers)
            nodes += out.nodes
            if out.status == "exhausted":
                return None, None, nodes, "inconclusive"
            if out.status == "found":
                return len(out.chosen), out.chosen, nodes, "exact"
        return None, None, nodes, "none"


# ---------------------------------------------------------------------------
# coset catalogues
# ---------------------------------------------------------------------------

def _coset_catalogue(group: FiniteAbelianGroup, mode: str, avoid_identity: bool) -> dict[int, list[Candidate]]:
    """Candidates containing each element, ordered by decreasing size
    then bitset order."""
    subs = enumerate_subgroups(group)
    proper = [h for h in subs if h.size < group.order] or subs
    pool: list[Candidate] = []
    for h in proper:
        cosets = [h.coset(0)] if mode == "subgroups" else h.cosets()
        for c in cosets:
            if avoid_identity and c.bits & 1:
                continue
            pool.append(Candidate(c.bits, c, h.member_bits))
    pool.sort(key=lambda c: (-popcount(c.bits), c.bits))
    by_elem: dict[int, list[Candidate]] = {u: [] for u in range(group.order)}
    for cand in pool:
        for u in indices_of(cand.bits):
            by_elem[u].append(cand)
    return by_elem


@dataclass
class MinCoverResult:
    invariant: str
    value: int | Unattainable | None
    witness: CosetSystem | None
    nodes_expanded: int
    status: str  # exact | unattainable | inconclusive
    lower_bound: int = 0

    def to_json(self) -> dict:
        return {
            "invariant": self.invariant,
            "value": str(self.value) if isinstance(self.value, Unattainable) else self.value,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "nodes_expanded": self.nodes_expanded,
            "status": self.status,
        }


def _default_budget(budget: SearchBudget | None, max_cosets: int) -> SearchBudget:
    if budget is None:
        return SearchBudget(max_cosets=max_cosets)
    if budget.max_cosets is None:
        return SearchBudget(max_cosets, budget.node_limit, budget.time_limit, budget.workers)
    return budget


def phi(group: FiniteAbelianGroup, budget: SearchBudget | None = None) -> MinCoverResult:
    """Fewest cosets whose union is the group minus the identity."""
    tau = tau_of(group.order)
    budget = _default_budget(budget, tau + 2)
    target = punctured_target(group)
    cat = _coset_catalogue(group, "cosets", avoid_identity=True)
    max_size = max((popcount(c.bits) for cs in cat.values() for c in cs), default=1)
    problem = CoverProblem(target, cat.__getitem__, max_size, irredundant=True)
    k_min = math.ceil(popcount(target) / max_size) if target else 0
    k, chosen, nodes, status = problem.minimize(k_min, budget.max_cosets, budget)
    if status == "exact":
        system = CosetSystem(group, tuple(c.tag for c in chosen))
        if k != tau:
            raise AssertionError(f"phi({group}) = {k} but tau({group.order}) = {tau}")
        return MinCoverResult("phi", k, system, nodes, "exact", k)
    # nothing within max_cosets, or budget ran out
    return MinCoverResult("phi", None, None, nodes, "inconclusive", k_min)


def punctured_cover_construct(group: FiniteAbelianGroup) -> CosetSystem:
    """tau(|G|) cosets covering G minus the identity, by repeatedly
    splitting off a subgroup of prime index."""
    if group.order < 2:
        raise GroupError("need |G| >= 2")
    orders = list(group.cyclic_orders)
    scale = [1] * group.rank
    cosets: list[Coset] = []
    while any(m > 1 for m in orders):
        i = max(j for j, m in enumerate(orders) if m > 1)
        p = min(factorize(orders[i]))
        orders[i] //= p
        scale[i] *= p
        # B = { sum_j scale_j * y_j e_j : 0 <= y_j < orders_j }
        coords = all_vectors_mixed(orders)
        elems = group.encode(coords * scale) if group.rank else [0]
        b = Subgroup(group, bits_from_indices(int(e) for e in elems))
        step = [0] * group.rank
        step[i] = scale[i] // p
        g = group.index(step)
        cur = g
        for _ in range(p - 1):
            cosets.append(Coset.make(b, cur))
            cur = group.add(cur, g)
    return CosetSystem(group, tuple(cosets))


def all_vectors_mixed(orders: Sequence[int]) -> np.ndarray:
    total = math.prod(orders)
    idx = np.arange(total, dtype=np.int64)
    out = np.empty((total, len(orders)), dtype=np.int64)
    w = 1
    for i, m in enumerate(orders):
        out[:, i] = (idx // w) % m
        w *= m
    return out


def min_trivial_intersection_cover(group: FiniteAbelianGroup, mode: str = "cosets", budget: SearchBudget | None = None) -> MinCoverResult:
    """f(G) (mode="cosets") or g(G) (mode="subgroups")."""
    if mode not in ("cosets", "subgroups"):
        raise ValueError(f"mode must be 'cosets' or 'subgroups', got {mode!r}")
    invariant = "f" if mode == "cosets" else "g"
    cat = _coset_catalogue(group, mode, avoid_identity=False)
    n_cands = len({c.bits for cs in cat.values() for c in cs})
    default_max = group.order if mode == "cosets" else n_cands
    budget = _default_budget(budget, default_max)
    max_size = max((popcount(c.bits) for cs in cat.values() for c in cs), default=1)

    def trivial_intersection(chosen: list[Candidate]) -> bool:
        acc = group.all_bits
        for c in chosen:
            acc &= c.direction
        return acc == 1

    problem = CoverProblem(
        group.all_bits, cat.__getitem__, max_size, trivial_intersection,
        irredundant=True, largest_first=(mode == "cosets"),
    )
    k_min = math.ceil(group.order / max_size)
    k, chosen, nodes, status = problem.minimize(k_min, budget.max_cosets, budget)
    if status == "exact":
        system = CosetSystem(group, tuple(c.tag for c in chosen))
        rep = audit(system)
        if not (rep.covers_target and rep.irredundant and rep.subgroup_intersection.is_trivial()):
            raise AssertionError("search returned an invalid witness")
        return MinCoverResult(invariant, k, system, nodes, "exact", k)
    if status == "none" and budget.max_cosets >= default_max:
        return MinCoverResult(invariant, UNATTAINABLE, None, nodes, "unattainable")
    return MinCoverResult(invariant, None, None, nodes, "inconclusive", k_min)


def verify_coset_index_bound(system: CosetSystem) -> bool:
    """k >= 1 + tau(|G:H_i|) (hence >= 1 + log2 |G:H_i|) for every member."""
    rep = audit(system)
    if not rep.covers_target or not rep.irredundant:
        raise ValueError("system is not an irredundant covering of its group")
    k = len(system)
    for c in system:
        idx = c.subgroup.index
        if k < 1 + tau_of(idx) or k < 1 + math.log2(idx):
            return False
    return True


@dataclass
class FedthmCheck:
    group: FiniteAbelianGroup
    bound: int
    f: MinCoverResult
    g: MinCoverResult | None
    holds: bool

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "bound": self.bound,
            "f": self.f.to_json(),
            "g": self.g.to_json() if self.g is not None else None,
            "holds": self.holds,
        }


def check_fedthm(group: FiniteAbelianGroup, budget: SearchBudget | None = None, with_g: bool = True) -> FedthmCheck:
    bound = 1 + lambda_of(group.order)
    f = min_trivial_intersection_cover(group, "cosets", budget)
    if f.status != "exact":
        raise BudgetExhausted(f"f({group}) search did not complete")
    holds = f.value >= bound
    g = None
    if with_g:
        g = min_trivial_intersection_cover(group, "subgroups", budget)
        if g.status == "inconclusive":
            raise BudgetExhausted(f"g({group}) search did not complete")
        if g.status == "exact":
            holds = holds and g.value >= f.value
    return FedthmCheck(group, bound, f, g, holds)


def verify_fedthm(group: FiniteAbelianGroup, budget: SearchBudget | None = None) -> bool:
    """g(G) >= f(G) >= 1 + lambda(|G|) on the computed values."""
    return check_fedthm(group, budget).holds


# ---------------------------------------------------------------------------
# blocking sets of affine spaces
# ---------------------------------------------------------------------------

@dataclass
class BlockingResult:
    n: int
    p: int
    value: int | None
    points: list[tuple[int, ...]] | None
    nodes_expanded: int
    status: str

    def to_json(self) -> dict:
        return {
            "invariant": "blocking",
            "n": self.n,
            "p": self.p,
            "value": self.value,
            "witness": [list(pt) for pt in self.points] if self.points is not None else None,
            "nodes_expanded": self.nodes_expanded,
            "status": self.status,
        }


def affine_hyperplane_masks(q: int, n: int) -> list[tuple[tuple[int, ...], int, int]]:
    """(normal, offset, point bits) for every affine hyperplane of GF(q)^n."""
    f = field_make(q)
    out = []
    for nrm in canonical_normals(q, n):
        for c in range(q):
            out.append((nrm, c, bits_from_mask(incidence_mask(f, n, nrm, c))))
    return out


def blocking_number(n: int, p: int, budget: SearchBudget | None = None) -> BlockingResult:
    """Smallest point set of GF(p)^n meeting every affine hyperplane."""
    if n < 1:
        raise ValueError("n must be >= 1")
    f = field_make(p)
    if not f.is_prime:
        raise ValueError("blocking_number is stated over prime fields")
    planes = affine_hyperplane_masks(p, n)
    n_points = p**n
    # dual cover problem: each point covers the set of hyperplanes through it
    point_sets = [0] * n_points
    for h, (_, _, bits) in enumerate(planes):
        for pt in indices_of(bits):
            point_sets[pt] |= 1 << h
    by_plane: dict[int, list[Candidate]] = {}
    for h, (_, _, bits) in enumerate(planes):
        by_plane[h] = [Candidate(point_sets[pt], pt) for pt in indices_of(bits)]
    max_size = max(popcount(s) for s in point_sets)
    target = (1 << len(planes)) - 1
    expected = 1 + n * (p - 1)
    budget = _default_budget(budget, expected + 2)
    problem = CoverProblem(target, by_plane.__getitem__, max_size, irredundant=True)
    k_min = math.ceil(len(planes) / max_size)
    k, chosen, nodes, status = problem.minimize(k_min, budget.max_cosets, budget)
    if status != "exact":
        return BlockingResult(n, p, None, None, nodes, "inconclusive")
    vecs = all_vectors(p, n)
    pts = sorted(tuple(int(x) for x in vecs[c.tag]) for c in chosen)
    if k != expected:
        raise AssertionError(f"blocking number of AG({n},{p}) computed as {k}, expected {expected}")
    return BlockingResult(n, p, k, pts, nodes, "exact")


def translation_invariant(system: CosetSystem, target: Iterable[int], t: int) -> bool:
    """audit(system + t, target + t) matches audit(system, target) up to translation."""
    group = system.group
    target = list(target)
    before = audit(system, target)
    moved = audit(system.translate(t), [group.add(x, t) for x in target])
    if before.covers_target != moved.covers_target or before.removable_indices != moved.removable_indices:
        return False
    if before.subgroup_intersection != moved.subgroup_intersection:
        return False
    if before.uncovered_witness is None:
        return moved.uncovered_witness is None
    missing_before = {group.add(x, t) for x in target if not system.union_bits >> x & 1}
    return moved.uncovered_witness in missing_before
